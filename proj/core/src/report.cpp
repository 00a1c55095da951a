#include "bnmix/report.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bnmix/error.hpp"

namespace bnmix {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw Error(Errc::DimensionMismatch, "CSV row width differs from header");
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvTable::str() const {
  std::ostringstream out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out.str();
}

void CsvTable::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::IoError, "cannot write " + path);
  f << str();
}

CsvTable profile_csv(const MixingProfile& p) {
  CsvTable t({"t", "d_t"});
  for (std::size_t i = 0; i < p.d.size(); ++i) t.row({cell(i), cell(p.d[i])});
  return t;
}

CsvTable restricted_csv(const RestrictedEvolution& r) {
  CsvTable t({"t", "d_t", "bound_t"});
  for (std::size_t i = 0; i < r.distance.size(); ++i) t.row({cell(i), cell(r.distance[i]), cell(r.bound[i])});
  return t;
}

CsvTable moments_csv(const HittingMoments& h) {
  CsvTable t({"vertex", "mean", "variance"});
  for (long v = 0; v < h.mean.size(); ++v) t.row({cell(v), cell(h.mean(v)), cell(h.variance(v))});
  return t;
}

CsvTable cutoff_csv(const CutoffReport& r) {
  CsvTable t({"k", "t_mix_eps", "t_mix_1m_eps", "ratio"});
  for (const auto& row : r.rows) t.row({cell(row.k), cell(row.t_mix_eps), cell(row.t_mix_1m_eps), cell(row.ratio)});
  return t;
}

CsvTable survival_csv(const CouplingResult& r) {
  CsvTable t({"t", "survival", "half_width"});
  for (std::size_t i = 0; i < r.survival.size(); ++i) t.row({cell(i), cell(r.survival[i]), cell(r.half_width[i])});
  return t;
}

namespace {

nlohmann::json num(double x) {
  if (!std::isfinite(x)) return format_double(x);
  return x;
}

template <class T>
nlohmann::json opt(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_floating_point_v<T>) {
    return num(*v);
  } else {
    return *v;
  }
}

}  // namespace

nlohmann::json to_json(const Summary& s) {
  return {{"n", s.n}, {"mean", num(s.mean)}, {"variance", num(s.variance)}, {"se_mean", num(s.se_mean)},
          {"se_variance", num(s.se_variance)}};
}

nlohmann::json to_json(const ExcursionStats& e) {
  return {{"L", to_json(e.L)},
          {"theta", to_json(e.theta)},
          {"lambda", to_json(e.lambda)},
          {"G", to_json(e.G)},
          {"rho", num(e.rho)},
          {"zeta_mean", num(e.zeta_mean)},
          {"xi_mean", num(e.xi_mean)},
          {"p_hat", num(e.p_hat)},
          {"exceeded", e.exceeded},
          {"assembled_bound", num(e.assembled_bound)}};
}

nlohmann::json to_json(const TheoremReport& r) {
  const auto& m = r.moments;
  nlohmann::json subtrees = nlohmann::json::array();
  for (const auto& s : m.subtrees) {
    subtrees.push_back({{"index", s.index}, {"leaf", s.leaf}, {"attach", s.attach}, {"mean", num(s.mean)}});
  }
  nlohmann::json j;
  j["graph"] = r.graph;
  j["laziness"] = r.laziness;
  j["params"] = {{"epsilon", num(r.epsilon)},
                 {"gamma", num(r.params.gamma)},
                 {"delta", num(r.params.delta)},
                 {"h_of_z", num(r.params.h_of_z)},
                 {"s", num(r.params.s_exp)},
                 {"prec_ratio", num(r.params.prec_ratio)},
                 {"upper_slack", num(r.params.upper_slack)}};
  j["moments"] = {{"E_c", num(m.E_c)},   {"Var_c", num(m.Var_c)}, {"E_dD", num(m.E_dD)},
                  {"Var_dD", num(m.Var_dD)}, {"dD_vertex", m.dD_vertex}, {"zeta", num(m.zeta)},
                  {"subtrees", subtrees}};
  j["bottleneck"] = {{"pi_S", num(r.pi_S)}, {"phi_S", num(r.phi_S)}, {"t_S", num(r.t_S)}, {"Phi", num(r.Phi)},
                     {"A", opt(r.A)},       {"A_note", r.A_note}};
  j["conditions"] = {{"c1_value", num(r.c1_value)},
                     {"c2_observed", opt(r.c2_observed)},
                     {"c2_claimed", num(r.c2_claimed)},
                     {"c3_first", r.c3_first},
                     {"c3_second", r.c3_second},
                     {"h_a_ratio", num(r.h_a_ratio)},
                     {"h_b_value", opt(r.h_b_value)},
                     {"h_b_ratio_theorem1", opt(r.h_b_ratio_theorem1)},
                     {"h_b_ratio_theorem0", opt(r.h_b_ratio_theorem0)},
                     {"t0b_prec_ratio", num(r.t0b_prec_ratio)}};
  j["H"] = {{"h1_lhs", num(r.h.h1_lhs)},
            {"h1_rhs", num(r.h.h1_rhs)},
            {"h1_margin", num(r.h.h1_margin)},
            {"h1_holds", r.h.h1_holds},
            {"h2_left_lhs", num(r.h.h2_left_lhs)},
            {"h2_left_margin", num(r.h.h2_left_margin)},
            {"h2_right_margin", num(r.h.h2_right_margin)},
            {"h2_holds", r.h.h2_holds},
            {"A_used", num(r.h.A)}};
  j["sandwich"] = {{"theorem1", {num(r.sandwich_theorem1.first), num(r.sandwich_theorem1.second)}},
                   {"theorem0", r.sandwich_theorem0 ? nlohmann::json{num(r.sandwich_theorem0->first),
                                                                     num(r.sandwich_theorem0->second)}
                                                    : nlohmann::json(nullptr)}};
  j["t_mix_exact"] = opt(r.t_mix_exact);
  j["restriction_lower"] = num(r.restriction_lower);
  j["lower_ok"] = opt(r.lower_ok);
  j["upper_within_slack"] = opt(r.upper_within_slack);
  const auto& f = r.flags;
  j["flags"] = {{"h1", f.h1},       {"h2", f.h2},   {"c1", f.c1},
                {"c3", f.c3},       {"h_a", f.h_a}, {"h_b_theorem1", f.h_b_theorem1},
                {"h_b_theorem0", f.h_b_theorem0}, {"A_defined", f.A_defined}, {"t0b_prec", f.t0b_prec},
                {"t0b_chain", f.t0b_chain}};
  j["verdict"] = to_string(r.verdict);
  j["implied"] = r.implied;
  if (r.excursions) j["excursions"] = to_json(*r.excursions);
  return j;
}

nlohmann::json to_json(const CutoffReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"k", num(row.k)},
                    {"epsilon", num(row.epsilon)},
                    {"t_mix_eps", row.t_mix_eps},
                    {"t_mix_1m_eps", row.t_mix_1m_eps},
                    {"ratio", num(row.ratio)}});
  }
  return {{"rows", rows},
          {"all_at_least_one", r.all_at_least_one},
          {"non_increasing", r.non_increasing},
          {"kendall_tau", num(r.kendall_tau)}};
}

nlohmann::json to_json(const Provenance& p) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : p.entries) j[k] = num(v);
  return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::IoError, "cannot write " + path);
  f << j.dump(2) << '\n';
}

}  // namespace bnmix
