#include "ontic/json_io.hpp"

#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ontic {

Json to_json(const ProjState& s) {
  Json re = Json::array(), im = Json::array();
  for (int i = 0; i < s.d(); ++i) {
    re.push_back(s[i].real());
    im.push_back(s[i].imag());
  }
  return Json{{"d", s.d()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ProjState state_from_json(const Json& j) {
  const int d = j.at("d").get<int>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<int>(re.size()) != d || static_cast<int>(im.size()) != d)
    throw std::invalid_argument("state_from_json: length mismatch");
  Vec v(d);
  for (int i = 0; i < d; ++i)
    v(i) = cxd(re[i].get<double>(), im[i].get<double>());
  return ProjState(std::move(v));
}

Json to_json(const OrthoBasis& m) {
  Json states = Json::array();
  for (const auto& s : m.states()) states.push_back(to_json(s));
  return Json{{"d", m.d()}, {"states", std::move(states)}};
}

Json to_json(const FiberedMeasure& m) {
  Json comps = Json::array();
  for (const auto& c : m.components())
    comps.push_back(Json{{"weight", c.weight},
                         {"fiber", to_json(c.fiber)},
                         {"lo", c.lo},
                         {"hi", c.hi},
                         {"tag", c.tag}});
  return Json{{"components", std::move(comps)}};
}

Json to_json(const OutcomeCheck& c) {
  return Json{
      {"estimate", c.estimate}, {"target", c.target}, {"se", c.se}, {"z", c.z}};
}

Json to_json(const BornReport& r) {
  Json outs = Json::array();
  for (const auto& o : r.outcomes) outs.push_back(to_json(o));
  return Json{{"theory", r.theory},   {"d", r.d},
              {"n", r.n},             {"z_max", r.z_max},
              {"seed", r.seed},       {"outcomes", std::move(outs)},
              {"pass", r.pass}};
}

Json to_json(const FractionEstimate& e) {
  return Json{{"hits", e.hits},
              {"n", e.n},
              {"fraction", e.fraction},
              {"wilson_lo", e.lo},
              {"wilson_hi", e.hi}};
}

Json to_json(const EvasionReport& r) {
  Json certs = Json::array();
  for (const auto& c : r.certificates)
    certs.push_back(Json{{"x", c.x},
                         {"disjoint", c.disjoint},
                         {"tail_mass", c.tail_mass},
                         {"tail_positive", c.tail_positive},
                         {"support_measure", c.support_measure},
                         {"pass", c.pass}});
  return Json{{"excluded_measure", r.excluded_measure},
              {"excluded_positive", r.excluded_positive},
              {"delta", r.delta},
              {"certificates", std::move(certs)},
              {"all_pass", r.all_pass}};
}

Json certificate_json(const std::string& check, int d, const Json& params,
                      std::uint64_t seed, const Json& result,
                      const Json& tolerances, bool pass) {
  return Json{{"check", check},   {"d", d},
              {"params", params}, {"seed", seed},
              {"result", result}, {"tolerances", tolerances},
              {"pass", pass}};
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

Json finalize_report(Json payload) {
  payload["schema"] = 1;
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0')
       << fnv1a(payload.dump());
  payload["determinism_hash"] = hash.str();
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  payload["timestamp"] = buf;
  return payload;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_report(const Json& payload, const std::string& path) {
  write_text(path, finalize_report(payload).dump(2) + "\n");
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::string csv_outcomes(const BornReport& r) {
  std::string s = "outcome,estimate,target,se,z\n";
  for (std::size_t k = 0; k < r.outcomes.size(); ++k) {
    const auto& o = r.outcomes[k];
    s += std::to_string(k) + "," + num(o.estimate) + "," + num(o.target) +
         "," + num(o.se) + "," + num(o.z) + "\n";
  }
  return s;
}

std::string csv_intervals(const IntervalSet& set) {
  std::string s = "lo,hi\n";
  for (const auto& [lo, hi] : set.intervals())
    s += num(lo) + "," + num(hi) + "\n";
  return s;
}

}  // namespace ontic
