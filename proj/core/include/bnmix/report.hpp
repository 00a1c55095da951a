#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bnmix/bottleneck.hpp"
#include "bnmix/coupling.hpp"
#include "bnmix/harness.hpp"
#include "bnmix/mixing.hpp"
#include "bnmix/sampling.hpp"

namespace bnmix {

/// Shortest round-trip decimal form; "nan"/"inf" for non-finite values.
std::string format_double(double x);

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& data);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  CsvTable& row(std::vector<std::string> cells);
  std::string str() const;
  void write(const std::string& path) const;
  std::size_t rows() const noexcept { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

template <class T>
std::string cell(T v) {
  if constexpr (std::is_floating_point_v<T>) {
    return format_double(static_cast<double>(v));
  } else {
    return std::to_string(v);
  }
}

CsvTable profile_csv(const MixingProfile& p);
CsvTable restricted_csv(const RestrictedEvolution& r);
CsvTable moments_csv(const HittingMoments& h);
CsvTable cutoff_csv(const CutoffReport& r);
CsvTable survival_csv(const CouplingResult& r);

nlohmann::json to_json(const Summary& s);
nlohmann::json to_json(const TheoremReport& r);
nlohmann::json to_json(const CutoffReport& r);
nlohmann::json to_json(const ExcursionStats& e);
nlohmann::json to_json(const Provenance& p);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace bnmix
