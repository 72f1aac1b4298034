// apw: experiment runner for magnetic Delone-set Hamiltonians.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "apw/chern.hpp"
#include "apw/config.hpp"
#include "apw/deform.hpp"
#include "apw/frames.hpp"
#include "apw/io.hpp"
#include "apw/translations.hpp"

namespace fs = std::filesystem;
using namespace apw;

namespace {

struct Run {
  ExperimentConfig cfg;
  fs::path out;
  json outputs = json::array();

  void emit(const std::string& name, const std::string& text) {
    write_text(out / name, text);
    outputs.push_back(name);
  }
};

Box lattice_window(const ExperimentConfig& c) {
  return Box::cube(c.model.dim, -0.5 * c.model.spacing, (c.model.size - 0.5) * c.model.spacing);
}

KernelOperator build_operator(const ExperimentConfig& c) {
  if (c.model.kind == "continuum") {
    const ContinuumModel m = continuum_model(c);
    GeneratorParams p = generator_params(c);
    const auto kind = p.jitter > 0.0 ? GeneratorKind::jittered_periodic : GeneratorKind::periodic_square;
    const DeloneSet atoms = generate(kind, p, m.window(), c.seed);
    return build_continuum_operator(m, atoms, continuum_grid(m));
  }
  const LatticeModel m = lattice_model(c);
  return build_lattice_operator(m, lattice_sites(m, c.model.jitter, c.seed));
}

Interval select_delta(const ExperimentConfig& c, const RVec& values) {
  if (!c.spectral.interval.empty()) return {c.spectral.interval[0], c.spectral.interval[1]};
  return below_gap(values, detect_gaps(values, c.spectral.min_gap), std::size_t(c.spectral.gap));
}

ProjectionOptions projection_options(const ExperimentConfig& c) {
  ProjectionOptions o;
  o.min_gap = c.spectral.min_gap;
  o.backend = backend_from_string(c.spectral.backend);
  o.degree = c.spectral.degree;
  return o;
}

// q <= 12 with flux * q integral, or 0.
int flux_denominator(double flux) {
  for (int q = 1; q <= 12; ++q)
    if (std::abs(flux * q - std::round(flux * q)) < 1e-9) return q;
  return 0;
}

int cmd_gen(Run& r) {
  const DeloneSet set = generate(generator_kind_from_string(r.cfg.model.generator), generator_params(r.cfg),
                                 lattice_window(r.cfg), r.cfg.seed);
  std::ostringstream os;
  write_pointset(os, set);
  r.emit("pointset.txt", os.str());
  const auto rep = verify(set);
  json j{{"points", set.size()}, {"r", set.r}, {"R", set.R}, {"verification", to_json(rep)}};
  r.emit("gen.json", dump(j));
  return rep.is_r_discrete && rep.is_R_dense ? 0 : 3;
}

int cmd_verify(Run& r, const std::string& input) {
  const fs::path path = input.empty() ? r.out / "pointset.txt" : fs::path(input);
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open point set '" + path.string() + "'");
  const DeloneSet set = read_pointset(in);
  const auto rep = verify(set);
  json j{{"input", path.string()}, {"points", set.size()}, {"verification", to_json(rep)},
         {"passed", rep.is_r_discrete && rep.is_R_dense}};
  r.emit("verify.json", dump(j));
  return rep.is_r_discrete && rep.is_R_dense ? 0 : 3;
}

int cmd_spectrum(Run& r) {
  const KernelOperator h = build_operator(r.cfg);
  const Eigensystem es = eig(h);
  r.emit("spectrum.csv", spectrum_csv(es.values));
  json gaps = json::array();
  for (const auto& g : detect_gaps(es.values, r.cfg.spectral.min_gap)) gaps.push_back(to_json(g));
  json j{{"dimension", h.size()},
         {"min", es.values[0]},
         {"max", es.values[es.values.size() - 1]},
         {"min_gap", r.cfg.spectral.min_gap},
         {"gaps", gaps}};
  r.emit("gaps.json", dump(j));
  return 0;
}

int cmd_frame(Run& r) {
  if (r.cfg.model.kind != "lattice") throw ConfigError("model.kind", "frame needs a lattice model");
  const LatticeModel m = lattice_model(r.cfg);
  const DeloneSet sites = lattice_sites(m, r.cfg.model.jitter, r.cfg.seed);
  const MagneticCocycle c = MagneticCocycle::from_flux(m.dim, m.flux);
  const KernelOperator h = build_lattice_operator(m, sites, c);
  const Eigensystem es = eig(h);
  const SpectralProjection p = spectral_projection(h, es, select_delta(r.cfg, es.values), projection_options(r.cfg));
  const CMat range = range_basis(p);
  const Basis& b = *h.basis;

  std::vector<Seed> seeds;
  for (int j = 0; j < r.cfg.frames.seeds_per_cell; ++j)
    seeds.push_back(gaussian_seed(r.cfg.frames.seed_width * (1.0 + 0.25 * j), r.cfg.frames.seed_cutoff));
  std::vector<RVec> centres;
  for (const auto& y : lattice_centres(b))
    for (std::size_t j = 0; j < seeds.size(); ++j) centres.push_back(y);
  const CMat family = translate_family(seeds, lattice_centres(b), c, b);
  const TranslateFrame fr = parseval_normalize(family, range, centres);
  const double margin = 2.0 * (r.cfg.frames.seed_cutoff + lattice_hopping(m).range);
  const CMat probes = interior_probes(range, b, margin, r.cfg.frames.probes, r.cfg.seed);
  const auto loc = localization_report(fr.vectors, centres, b, sites.r);

  const auto sub = lattice_centres(b, r.cfg.frames.stride, r.cfg.frames.offset);
  const LoewdinResult lw = loewdin(p.matrix * translate_family({seeds.front()}, sub, c, b), r.cfg.frames.loewdin_eps);

  json j{{"rank", p.rank},
         {"family_size", family.cols()},
         {"surplus", family.cols() - p.rank},
         {"frame_bounds", {{"C", fr.frame_op.lower}, {"D", fr.frame_op.upper}}},
         {"parseval_residual", parseval_residual(fr.vectors, probes)},
         {"resolution_of_identity", spectral_norm(fr.vectors * fr.vectors.adjoint() - p.matrix)},
         {"dual_reconstruction_residual", dual_reconstruction_residual(family, range, probes)},
         {"localization",
          {{"max_second_moment", loc.max_moment},
           {"mean_second_moment", loc.mean_moment},
           {"mean_decay_exponent", loc.mean_exponent}}},
         {"loewdin",
          {{"family_size", sub.size()}, {"kappa", std::isfinite(lw.kappa) ? json(lw.kappa) : json(nullptr)},
           {"gram_singular", lw.gram_singular}, {"min_eigenvalue", lw.min_eigenvalue}}}};
  r.emit("frame.json", dump(j));
  if (r.cfg.frames.dump_vectors) r.emit("frame_vectors.csv", vectors_csv(fr.vectors));
  return 0;
}

int cmd_chern(Run& r) {
  const KernelOperator h = build_operator(r.cfg);
  const Eigensystem es = eig(h);
  const SpectralProjection p = spectral_projection(h, es, select_delta(r.cfg, es.values), projection_options(r.cfg));
  const ChernResult c = chern_top(p, chern_options(r.cfg));
  json j = to_json(c);
  j["rank"] = p.rank;
  j["gap_margin"] = p.gap_margin;
  j["oracle"] = nullptr;
  const LatticeModel m = lattice_model(r.cfg);
  const int q = flux_denominator(m.flux);
  const bool periodic_reference = r.cfg.model.kind == "lattice" && m.dim == 2 && m.hopping == "nearest" &&
                                  m.boundary == Boundary::periodic && r.cfg.model.jitter == 0.0 && q > 0 &&
                                  (m.stripe.empty() || int(m.stripe.size()) == q);
  if (periodic_reference) {
    const int bands = int(std::lround(double(p.rank) * q / double(h.size())));
    if (bands >= 1 && bands <= q) {
      const auto o = bloch_oracle(int(std::lround(m.flux * q)), q, m.stripe, 0, bands - 1);
      j["oracle"] = o.chern;
      j["oracle_agrees"] = std::abs(c.value - double(o.chern)) < r.cfg.chern.tolerance;
    }
  }
  r.emit("chern.json", dump(j));
  return 0;
}

int cmd_dichotomy(Run& r) {
  const auto rows = dichotomy_experiment(lattice_model(r.cfg), r.cfg.frames.windows, dichotomy_options(r.cfg));
  json table = json::array();
  for (const auto& row : rows) table.push_back(to_json(row));
  json j{{"rows", table}};
  if (rows.size() >= 2) {
    const auto& a = rows.front();
    const auto& z = rows.back();
    j["kappa_growth"] = std::isfinite(z.kappa / a.kappa) ? json(z.kappa / a.kappa) : json(nullptr);
    j["parseval_moment_change"] = std::abs(z.parseval_max_moment - a.parseval_max_moment) / a.parseval_max_moment;
  }
  r.emit("dichotomy.json", dump(j));
  return 0;
}

int cmd_deform(Run& r) {
  const ExperimentConfig& c = r.cfg;
  json j;
  int code = 0;
  if (c.model.kind == "continuum") {
    const ContinuumModel m = continuum_model(c);
    GeneratorParams p = generator_params(c);
    p.jitter = c.deform.jitter;
    const DeloneSet a = generate(GeneratorKind::periodic_square, p, m.window(), c.seed);
    const DeloneSet b = generate(GeneratorKind::jittered_periodic, p, m.window(), c.deform.jitter_seed);
    const HalvingStudy hs = resolvent_halving(a, b, c.deform.samples, cplx(0.0, 1.0), m);
    j = json{{"z", {0.0, 1.0}}, {"coarse", to_json(hs.coarse)}, {"fine", to_json(hs.fine)}, {"halving_ratio", hs.ratio}};
    r.emit("deform.json", dump(j));
    return hs.coarse.all_hold && hs.fine.all_hold ? 0 : 3;
  }
  const LatticeModel m = lattice_model(c);
  const DeloneSet a = lattice_sites(m);
  const auto es = eig(build_lattice_operator(m, a));
  const auto gaps = detect_gaps(es.values, c.spectral.min_gap);
  if (std::size_t(c.spectral.gap) >= gaps.size()) throw Error(Errc::gap_closed, "no gap at the start of the path");
  const double tracked = gaps[std::size_t(c.spectral.gap)].mid();
  GappedPathReport rep;
  if (c.deform.path == "lattice") {
    const DeloneSet b = lattice_sites(m, c.deform.jitter, c.deform.jitter_seed);
    rep = run_lattice_deformation(make_path(a, b, c.deform.samples), m, tracked, deform_options(c));
  } else {
    std::vector<double> t;
    for (int k = 0; k <= c.deform.flux_steps; ++k) t.push_back(double(k) / c.deform.flux_steps);
    rep = run_field_deformation(a, t, flux_path(m.dim, m.flux, c.deform.flux_step, c.deform.flux_steps), m,
                                tracked, deform_options(c));
  }
  j = to_json(rep);
  r.emit("deform.json", dump(j));
  if (rep.verdict == Verdict::gap_closed) code = 3;
  return code;
}

void print_error(const std::string& kind, const std::string& message, const std::string& key = {}) {
  json j{{"error", kind}, {"message", message}};
  if (!key.empty()) j["key"] = key;
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnetic Delone-set Hamiltonians: spectra, frames, Chern numbers, deformations"};
  app.require_subcommand(1);
  std::string config_path, input;
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
  std::string out_dir;
  app.add_option("--config", config_path, "TOML experiment config")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "RNG seed (overrides the config)");
  app.add_option("--set", overrides, "dotted-path override key=value")->take_all();
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  const std::vector<std::string> names{"gen", "verify", "spectrum", "frame", "chern", "dichotomy", "deform"};
  for (const auto& n : names) {
    auto* sub = app.add_subcommand(n, "");
    sub->fallthrough();
    if (n == "verify") sub->add_option("--input", input, "point set file (default <out>/pointset.txt)");
  }
  app.get_subcommand("gen")->description("generate a point set and verify it");
  app.get_subcommand("verify")->description("verify the Delone parameters of a point set");
  app.get_subcommand("spectrum")->description("eigenvalues (CSV) and gap report (JSON)");
  app.get_subcommand("frame")->description("Parseval frame of magnetic translates and Loewdin comparison");
  app.get_subcommand("chern")->description("real-space Chern number with Bloch oracle where available");
  app.get_subcommand("dichotomy")->description("localization dichotomy across window sizes");
  app.get_subcommand("deform")->description("gapped deformation along a point-set or field path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("UsageError", e.what());
    return 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  try {
    Run r;
    if (app.count("--seed")) overrides.push_back("seed=" + std::to_string(seed));
    if (app.count("--out")) overrides.push_back("output_dir=\"" + out_dir + "\"");
    r.cfg = config_path.empty() ? parse_config("", overrides) : load_config(config_path, overrides);
    r.out = r.cfg.output_dir;
    fs::create_directories(r.out);
    int code = 0;
    if (cmd == "gen") code = cmd_gen(r);
    else if (cmd == "verify") code = cmd_verify(r, input);
    else if (cmd == "spectrum") code = cmd_spectrum(r);
    else if (cmd == "frame") code = cmd_frame(r);
    else if (cmd == "chern") code = cmd_chern(r);
    else if (cmd == "dichotomy") code = cmd_dichotomy(r);
    else if (cmd == "deform") code = cmd_deform(r);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text(r.out / "manifest.json", dump(manifest(r.cfg, cmd, wall, r.outputs)));
    return code;
  } catch (const ConfigError& e) {
    print_error("ConfigError", e.what(), e.key());
    return 2;
  } catch (const Error& e) {
    print_error(to_string(e.code()), e.what());
    return is_numerical(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    print_error("Error", e.what());
    return 2;
  }
}
