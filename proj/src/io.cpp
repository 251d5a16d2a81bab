#include "regretlab/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <map>
#include <sstream>

#include "regretlab/error.hpp"
#include "regretlab/pde.hpp"

namespace regretlab {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

double parse_number(const std::string& s, const std::string& whole) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw ValidationError("cannot parse '" + whole + "' as a number or fraction p/q");
  }
  return v;
}

}  // namespace

double parse_fraction(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return parse_number(s, s);
  double num = parse_number(s.substr(0, slash), s);
  double den = parse_number(s.substr(slash + 1), s);
  if (!(den > 0) || den != std::floor(den)) {
    throw ValidationError("fraction '" + s + "' needs a positive integer denominator");
  }
  return num / den;
}

std::vector<double> parse_fraction_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_fraction(item));
  }
  if (out.empty()) throw ValidationError("empty list '" + s + "'");
  return out;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_digest(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::sep() {
  if (col_ >= columns_) throw ValidationError("csv row has too many fields");
  if (col_++) out_ << ',';
}

CsvWriter& CsvWriter::operator<<(double x) {
  sep();
  out_ << format_double(x);
  return *this;
}

CsvWriter& CsvWriter::operator<<(long x) {
  sep();
  out_ << x;
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& s) {
  sep();
  out_ << s;
  return *this;
}

void CsvWriter::end_row() {
  if (col_ != columns_) throw ValidationError("csv row has too few fields");
  out_ << '\n';
  col_ = 0;
}

std::string cycle_label(const SimpleCycle& c) {
  std::string s;
  for (auto v : c.vertices) s += std::to_string(v);
  s += std::to_string(c.vertices.front());
  return s;
}

Json cycles_json(int d, const std::vector<SimpleCycle>& cycles) {
  Json j;
  j["d"] = d;
  j["count"] = cycles.size();
  std::map<std::size_t, std::size_t> by_length;
  for (const auto& c : cycles) ++by_length[c.length()];
  Json lengths = Json::object();
  for (auto [len, n] : by_length) lengths[std::to_string(len)] = n;
  j["count_by_length"] = lengths;
  Json list = Json::array();
  for (const auto& c : cycles) {
    list.push_back({{"label", cycle_label(c)}, {"vertices", c.vertices}, {"signs", c.signs}});
  }
  j["cycles"] = list;
  return j;
}

Json lp_json(const LpSolution& sol, const CycleLp& lp) {
  Json j;
  j["side"] = to_string(sol.side);
  j["status"] = to_string(sol.status);
  j["M"] = sol.M;
  j["beta"] = sol.beta;
  j["iterations"] = sol.iterations;
  Json rows = Json::array();
  double worst = 0;
  for (std::size_t i = 0; i < lp.cycles.size(); ++i) {
    double r = cycle_rate(lp, i, sol.beta) - sol.M;
    worst = std::max(worst, std::abs(r));
    rows.push_back({{"cycle", cycle_label(lp.cycles[i])}, {"residual", r}});
  }
  j["max_abs_residual"] = worst;
  j["cycles"] = rows;
  return j;
}

Json experts_json(const ExpertPair& e) {
  return Json{{"d", e.depth()}, {"q", e.q()}, {"r", e.r()}};
}

Json final_data_json(const FinalData& d) {
  Json j;
  j["kind"] = d.kind() == FinalKind::Classic ? "classic" : d.name();
  for (const auto& [k, v] : d.parameters) j[k] = v;
  return j;
}

ExpertPair experts_from_json(const Json& j) {
  if (j.contains("random")) {
    const auto& r = j["random"];
    return random_pair(r.value("d", 1), r.value("seed", std::uint64_t{1}),
                       r.value("bound", 0.8));
  }
  if (!j.contains("q") || !j.contains("r")) {
    throw ValidationError("experts need arrays \"q\" and \"r\" (or a \"random\" block)");
  }
  return ExpertPair::validate(j["q"].get<std::vector<double>>(),
                              j["r"].get<std::vector<double>>());
}

FinalData final_data_from_json(const Json& j, double C) {
  std::string kind = j.value("kind", std::string("classic"));
  auto num = [&](const char* key, double fallback) { return j.value(key, fallback); };
  if (kind == "classic") return FinalData::classic();
  if (kind == "hyperbolic") return hyperbolic_data(num("c", 0.5), num("a", 0.4));
  if (kind == "affine") return affine_data(num("c", 0.5), num("a", 0.2));
  if (kind == "logcosh") return logcosh_data(num("alpha", 0.2), num("a", 0.7));
  if (kind == "shear") return shear_data(num("a", 0.3), num("kappa", 0.5));
  if (kind == "classic_envelope") {
    bool above = j.contains("above") && j["above"].is_number()
                     ? j["above"].get<double>() != 0
                     : j.value("side", std::string("above")) != "below";
    auto side = above ? EnvelopeSide::Above : EnvelopeSide::Below;
    return smooth_classic_envelope(num("C", C), num("delta", 0.25), side);
  }
  throw ValidationError("unknown final data kind '" + kind + "'");
}

void write_value_csv(std::ostream& out, const GameValue& v, int k) {
  std::vector<std::string> header{"k", "m", "xi"};
  if (!v.separable) header.push_back("eta");
  header.push_back("V");
  CsvWriter w(out, header);
  for (const auto& s : v.slices) {
    if (s.k != k) continue;
    std::size_t E = v.separable ? 1 : s.eta.size();
    for (std::size_t i = 0; i < s.xi.size(); ++i) {
      for (std::size_t j = 0; j < E; ++j) {
        w << s.k << static_cast<long>(s.m) << s.xi[i];
        if (!v.separable) w << s.eta[j];
        w << s.v[i * E + j];
        w.end_row();
      }
    }
  }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  CsvWriter w(out, {"step", "t", "m", "xi", "eta", "f", "b", "clamped_flag"});
  for (const auto& s : tr.steps) {
    w << s.k << s.t << static_cast<long>(s.m) << s.xi << s.eta << s.f << s.b
      << (s.clamped ? 1 : 0);
    w.end_row();
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  CsvWriter w(out, {"epsilon", "N", "approx", "u", "error", "error_over_eps",
                    "error_over_eps_log"});
  for (const auto& r : rows) {
    w << r.epsilon << r.N << r.approx << r.u << r.error << r.error_over_eps
      << r.error_over_eps_log;
    w.end_row();
  }
}

std::string RunManifest::digest() const {
  return hex_digest(fnv1a(command + "\n" + config.dump()));
}

Json RunManifest::to_json() const {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  Json j;
  j["command"] = command;
  j["config_digest"] = digest();
  j["config"] = config;
  j["seeds"] = seeds;
  j["tool_version"] = kToolVersion;
  j["created"] = stamp;
  j["outputs"] = outputs;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  return j;
}

}  // namespace regretlab
