#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "regretlab/experts.hpp"
#include "regretlab/final_data.hpp"
#include "regretlab/game.hpp"
#include "regretlab/graph.hpp"
#include "regretlab/playsim.hpp"
#include "regretlab/strategylp.hpp"
#include "regretlab/sweep.hpp"

namespace regretlab {

using Json = nlohmann::ordered_json;

constexpr const char* kToolVersion = "0.3.0";

// %.17g, so doubles round-trip.
std::string format_double(double x);

// "1/64", "0.25" or "3". Denominators must be positive integers.
double parse_fraction(const std::string& s);
std::vector<double> parse_fraction_list(const std::string& s);

// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);
std::string hex_digest(std::uint64_t h);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  CsvWriter& operator<<(double x);
  CsvWriter& operator<<(long x);
  CsvWriter& operator<<(int x) { return *this << static_cast<long>(x); }
  CsvWriter& operator<<(const std::string& s);
  void end_row();

 private:
  void sep();
  std::ostream& out_;
  std::size_t columns_;
  std::size_t col_ = 0;
};

// Digits of the vertices with the first repeated at the end, e.g. "01320".
std::string cycle_label(const SimpleCycle& c);

Json cycles_json(int d, const std::vector<SimpleCycle>& cycles);
Json lp_json(const LpSolution& sol, const CycleLp& lp);
Json experts_json(const ExpertPair& e);
Json final_data_json(const FinalData& d);

// {"q": [...], "r": [...]} or {"random": {"d": 2, "seed": 1, "bound": 0.8}}.
ExpertPair experts_from_json(const Json& j);
// {"kind": "classic"} or a named fixture with its parameters. Envelopes
// need the diffusion constant C.
FinalData final_data_from_json(const Json& j, double C);

void write_value_csv(std::ostream& out, const GameValue& v, int k);
void write_trajectory_csv(std::ostream& out, const Trajectory& tr);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct RunManifest {
  std::string command;
  Json config;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> outputs;
  Json extra = Json::object();

  // The digest covers the command and config only.
  std::string digest() const;
  Json to_json() const;
};

}  // namespace regretlab
