#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hopf/correspondence.hpp"
#include "hopf/io.hpp"
#include "hopf/search.hpp"
#include "hopf/verify.hpp"
#include "support.hpp"

using namespace hopf;
namespace fs = std::filesystem;

namespace {

const fs::path kExamples = fs::path(HOPF_SOURCE_DIR) / "docs" / "examples";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
T round_trip(const T& value) {
  const auto text = dump_document({value});
  CHECK(dump_document({value}) == text);
  const auto back = parse_document(text);
  REQUIRE(std::holds_alternative<T>(back.payload));
  CHECK(dump_document(back) == text);
  return std::get<T>(back.payload);
}

std::string error_of(const std::string& text) {
  try {
    parse_document(text, "doc");
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::string mutate(const std::string& text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.substr(0, at) + to + text.substr(at + from.size());
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("golden examples are canonical") {
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(kExamples)) {
    const auto text = slurp(entry.path());
    const auto doc = load(entry.path());
    CHECK(entry.path().stem().string() == doc.kind());
    CHECK(dump_document(doc) == text);
    ++seen;
  }
  CHECK(seen == 7);
}

TEST_CASE("values survive a round trip") {
  test::Rng rng(109);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = test::random_pomdp(rng, 1 + test::uniform(rng, 4), 1 + test::uniform(rng, 3),
                                      1 + test::uniform(rng, 3));
    CHECK(round_trip(p) == p);
    const auto a = test::random_agent(rng, 1 + test::uniform(rng, 3), 1 + test::uniform(rng, 3),
                                      1 + test::uniform(rng, 3));
    CHECK(round_trip(a) == a);
    const auto w = agent_to_pf(a);
    CHECK(round_trip(w) == w);
    const auto wn = ProcessFunctionN::from_one_input(w);
    CHECK(round_trip(wn) == wn);
  }
  const DetPomdp labelled(FiniteSet(2, {"on", "off"}), FiniteSet(1, {"wait"}), FiniteSet(1),
                          {1, 0}, {0, 0}, {0.1, 1e-300});
  CHECK(round_trip(labelled) == labelled);

  const auto gyni = gyni_env(3);
  CHECK(round_trip(gyni) == gyni);
  CHECK(round_trip(gyni.with_factored_obs(std::nullopt)) == gyni.with_factored_obs(std::nullopt));

  const ProcessFunction1 loop(FiniteSet(1), FiniteSet(2), FiniteSet(1), FiniteSet(2), {0, 0, 0, 1});
  const auto invalid = validated(loop);
  CHECK(round_trip(invalid) == invalid);
  CHECK(round_trip(loop) == loop);
  const auto swap = validated(test::bit_pf2([](Index o1, Index o2) { return std::pair{o2, o1}; }));
  CHECK(round_trip(swap) == swap);

  SearchOptions options;
  options.gamma = 0.3;
  const auto report = advantage_search(gyni_env(2), StrategyShape{1, {{2, 2}, {2, 2}}}, options, "g");
  CHECK(round_trip(report) == report);
  auto single = report;
  single.best_ordered.reset();
  single.advantage.reset();
  CHECK(round_trip(single) == single);

  TrajectoryRecord record{{{0, 1}, {2, 3}, {0.25}}, DiscountSummary{0.9, 1.0 / 3.0, false, 1e-3, 7}};
  CHECK(round_trip(record) == record);
  record.discounted.reset();
  CHECK(round_trip(record) == record);
}

TEST_CASE("reals keep every bit") {
  test::Rng rng(113);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  std::vector<double> rewards(64);
  for (auto& r : rewards) r = dist(rng) / 3.0;
  rewards[0] = 0.1;
  rewards[1] = -0.0;
  rewards[2] = 5e-324;
  const DetPomdp p(FiniteSet(8), FiniteSet(8), FiniteSet(1), std::vector<Index>(64, 0),
                   std::vector<Index>(64, 0), rewards);
  CHECK(round_trip(p).rewards() == rewards);
}

TEST_CASE("errors name the offending field") {
  const auto pomdp = slurp(kExamples / "pomdp.json");
  CHECK(error_of(mutate(pomdp, "\"T\": [0, 1, 0, 2, 1, 2]", "\"T\": [0, 1, 0, 2, 1]"))
            .find("doc.payload.T") != std::string::npos);
  const auto dup = error_of(mutate(pomdp, "\"middle\"", "\"left\""));
  CHECK(dup.find("doc.payload.S.labels") != std::string::npos);
  CHECK(dup.find("duplicate") != std::string::npos);
  CHECK_THROWS_AS(parse_document(mutate(pomdp, "\"format_version\": \"1\"", "\"format_version\": \"2\"")),
                  Error);
  CHECK(error_of(mutate(pomdp, "\"kind\": \"pomdp\"", "\"kind\": \"teapot\"")).find("doc.kind") !=
        std::string::npos);
  CHECK(error_of(mutate(pomdp, "\"R\"", "\"Q\"")).find("doc.payload.R") != std::string::npos);
  CHECK(error_of(mutate(pomdp, "\"T\": [0, 1", "\"T\": [-1, 1")).find("doc.payload.T[0]") !=
        std::string::npos);

  const auto syntax = error_of("{\n  \"kind\": \n}");
  CHECK(syntax.find("line 3") != std::string::npos);

  // A recorded verdict that does not hold.
  const auto pf = slurp(kExamples / "process_function_1.json");
  const auto lie = error_of(mutate(pf, "\"w\": [0, 1, 1, 1", "\"w\": [0, 1, 1, 0"));
  CHECK(lie.find("doc.payload.status") != std::string::npos);

  // The dec_pomdp factored tables are checked against the joint table.
  const auto dec = slurp(kExamples / "dec_pomdp.json");
  CHECK(error_of(mutate(dec, "[0, 0, 0, 0, 1, 1, 1, 1]", "[1, 0, 0, 0, 1, 1, 1, 1]"))
            .find("factored_obs") != std::string::npos);
}

TEST_CASE("save and load through files") {
  const auto dir = fs::temp_directory_path() / "hopf_io_test";
  fs::create_directories(dir);
  const auto g = gyni_env(2);
  save({g}, dir / "g.json");
  CHECK(std::get<DecPomdp>(load(dir / "g.json").payload) == g);
  CHECK_THROWS_AS(load(dir / "missing.json"), Error);
  fs::remove_all(dir);
}

TEST_CASE("csv flattening") {
  const auto doc = load(kExamples / "search_report.json");
  const auto csv = report_csv(std::get<SearchReport>(doc.payload));
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0].rfind("environment_id,mode,value,order", 0) == 0);
  CHECK(lines[1].rfind("gyni-2,general,", 0) == 0);
  CHECK(lines[2].rfind("gyni-2,ordered,", 0) == 0);
}

}  // TEST_SUITE
