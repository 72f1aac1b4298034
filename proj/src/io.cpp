#include "apw/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <Eigen/Core>

namespace apw {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(Errc::io_error, "write failed for '" + path.string() + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

std::string spectrum_csv(const RVec& values) {
  std::string out = "index,value\n";
  for (Eigen::Index i = 0; i < values.size(); ++i) out += std::to_string(i) + "," + g17(values[i]) + "\n";
  return out;
}

std::string vectors_csv(const CMat& v) {
  std::string out = "vector,index,re,im\n";
  for (Eigen::Index j = 0; j < v.cols(); ++j)
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      out += std::to_string(j) + "," + std::to_string(i) + "," + g17(v(i, j).real()) + "," + g17(v(i, j).imag()) + "\n";
  return out;
}

json to_json(const Interval& i) { return json{{"lo", number(i.lo)}, {"hi", number(i.hi)}, {"mid", number(i.mid())}}; }

json to_json(const VerificationReport& r) {
  return json{{"min_pair_dist", number(r.min_pair_dist)}, {"covering_radius", number(r.covering_radius)},
              {"is_r_discrete", r.is_r_discrete},         {"is_R_dense", r.is_R_dense},
              {"probe_pitch", number(r.probe_pitch)},     {"probes", r.probes}};
}

json to_json(const ChernResult& r) {
  return json{{"value", number(r.value)},
              {"imag", number(r.imag)},
              {"k", r.k},
              {"window_fractions", numbers(r.fractions)},
              {"per_fraction", numbers(r.per_fraction)},
              {"extrapolated", number(r.extrapolated)},
              {"spread", number(r.spread)},
              {"nearest", r.nearest},
              {"integrality", r.integral}};
}

json to_json(const GappedPathReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples)
    samples.push_back(json{{"t", number(s.t)},
                           {"gap", to_json(s.gap)},
                           {"delta", to_json(s.delta)},
                           {"margin", number(s.margin)},
                           {"rank", s.rank},
                           {"chern", to_json(s.chern)}});
  json j{{"verdict", to_string(r.verdict)},
         {"max_drift", number(r.max_drift)},
         {"tolerance", number(r.tolerance)},
         {"samples", samples},
         {"note", "gap checked on the sampled window only"}};
  if (r.verdict == Verdict::gap_closed) j["t_closed"] = number(r.t_closed);
  return j;
}

json to_json(const ResolventSweep& s) {
  json steps = json::array();
  for (const auto& b : s.steps)
    steps.push_back(json{{"lhs", number(b.lhs)},
                         {"rhs", number(b.rhs)},
                         {"norm_r1", number(b.norm_r1)},
                         {"norm_r2", number(b.norm_r2)},
                         {"holds", b.holds}});
  return json{{"median_lhs", number(s.median_lhs)}, {"all_hold", s.all_hold}, {"steps", steps}};
}

json to_json(const DichotomyRow& r) {
  return json{{"window", r.window},
              {"rank", r.rank},
              {"chern", number(r.chern)},
              {"kappa", number(r.kappa)},
              {"gram_singular", r.gram_singular},
              {"loewdin_max_moment", number(r.loewdin_max_moment)},
              {"parseval_max_moment", number(r.parseval_max_moment)},
              {"parseval_residual", number(r.parseval_residual)}};
}

json manifest(const ExperimentConfig& cfg, const std::string& subcommand, double wall_seconds,
              const json& outputs) {
  const std::string canonical = to_toml(cfg);
  return json{{"subcommand", subcommand},
              {"config_hash", "fnv1a64:" + hex64(fnv1a64(canonical))},
              {"seed", cfg.seed},
              {"versions",
               {{"apw", kVersion},
                {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION)},
                {"compiler", __VERSION__}}},
              {"outputs", outputs},
              {"wall_time_s", wall_seconds}};
}

}  // namespace apw
