#include <algorithm>
#include <cctype>
#include <cmath>

#include "doctest.h"
#include "ontic/json_io.hpp"
#include "ontic/rng.hpp"
#include "ontic/sampling.hpp"

using namespace ontic;

TEST_CASE("states round-trip through json") {
  Rng rng(81);
  for (int d = 2; d <= 5; ++d) {
    const ProjState s = haar_state(d, rng);
    const ProjState back = state_from_json(to_json(s));
    CHECK(back.d() == d);
    // the digits round-trip exactly; reconstruction renormalizes, which may
    // move each component by an ulp
    CHECK((back.amp() - s.amp()).norm() <= 1e-15);
    CHECK(states_equal(back, s));
  }
}

TEST_CASE("fnv1a matches the published test vectors") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("finalized reports carry schema and a stable determinism hash") {
  Json payload;
  payload["command"] = "verify";
  payload["results"]["value"] = 0.25;
  const Json a = finalize_report(payload);
  CHECK(a.at("schema") == 1);
  CHECK(a.contains("timestamp"));
  const std::string hash = a.at("determinism_hash");
  CHECK(hash.size() == 16);  // zero-padded 64-bit hex
  for (char c : hash) CHECK(std::isxdigit(static_cast<unsigned char>(c)));

  // same payload later (different wall clock) hashes identically
  const Json b = finalize_report(payload);
  CHECK(b.at("determinism_hash") == hash);

  // any payload change moves the hash
  payload["results"]["value"] = 0.26;
  const Json c = finalize_report(payload);
  CHECK(c.at("determinism_hash") != hash);
}

TEST_CASE("certificate json carries the standard envelope") {
  const Json cert = certificate_json("cantor", 0, Json{{"depth", 5}}, 42,
                                     Json{{"measure", 0.7}},
                                     Json{{"abs", 1e-9}}, true);
  CHECK(cert.at("check") == "cantor");
  CHECK(cert.at("seed") == 42);
  CHECK(cert.at("pass") == true);
  CHECK(cert.at("params").at("depth") == 5);
  CHECK(cert.at("result").at("measure") == 0.7);
  CHECK(cert.at("tolerances").at("abs") == 1e-9);
}

TEST_CASE("csv emitters produce one row per record") {
  BornReport r;
  r.theory = "x";
  r.d = 2;
  r.n = 10;
  r.outcomes = {{0.5, 0.5, 0.01, 0.0}, {0.5, 0.5, 0.01, 0.0}};
  const std::string csv = csv_outcomes(r);
  CHECK(csv.find("estimate") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 rows

  const std::string ivals = csv_intervals(IntervalSet({{0.0, 0.5}, {0.6, 1.0}}));
  CHECK(std::count(ivals.begin(), ivals.end(), '\n') == 3);
}
