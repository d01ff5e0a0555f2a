#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "morandim/dimension.hpp"
#include "morandim/geometry.hpp"
#include "morandim/report.hpp"
#include "morandim/scale_function.hpp"
#include "morandim/spec_io.hpp"
#include "morandim/util.hpp"
#include "morandim/validation.hpp"
#include "morandim/words.hpp"

namespace {

using namespace morandim;

// exit codes: 0 ok, 2 parse, 3 validation, 4 budget, 5 precondition/usage,
// 6 internal
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitBudget = 4;
constexpr int kExitPrecondition = 5;
constexpr int kExitInternal = 6;

struct CommonOpts {
  std::string input;
  std::string out_dir;
  double tol = 1e-12;
};

std::filesystem::path out_dir_of(const CommonOpts& c) {
  if (!c.out_dir.empty()) return c.out_dir;
  if (const char* env = std::getenv("MORANDIM_OUT")) return env;
  return ".";
}

void write_file(const std::filesystem::path& dir, const std::string& name,
                const std::string& content) {
  std::filesystem::create_directories(dir);
  std::filesystem::path p = dir / name;
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << content;
  std::cout << "wrote " << p.string() << "\n";
}

// grid forms: "0.1,0.01,..." or "B^E1..E2" (integer exponents, descending)
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  auto caret = text.find('^');
  if (caret != std::string::npos && text.find("..") != std::string::npos) {
    double base = std::stod(text.substr(0, caret));
    std::string range = text.substr(caret + 1);
    auto dots = range.find("..");
    int e1 = std::stoi(range.substr(0, dots));
    int e2 = std::stoi(range.substr(dots + 2));
    if (e1 < e2) std::swap(e1, e2);
    for (int e = e1; e >= e2; --e) out.push_back(std::pow(base, e));
    return out;
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                  : comma - pos);
    if (!tok.empty()) out.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty grid '" + text + "'");
  return out;
}

// like parse_grid, but exact: "3^-2..-8" expands to rational powers
std::vector<Ratio> parse_ratio_grid(const std::string& text) {
  std::vector<Ratio> out;
  auto caret = text.find('^');
  if (caret != std::string::npos && text.find("..") != std::string::npos) {
    Ratio base = Ratio::parse(text.substr(0, caret));
    std::string range = text.substr(caret + 1);
    auto dots = range.find("..");
    int e1 = std::stoi(range.substr(0, dots));
    int e2 = std::stoi(range.substr(dots + 2));
    if (e1 < e2) std::swap(e1, e2);
    for (int e = e1; e >= e2; --e) {
      Ratio b = e < 0 ? Ratio(base.den(), base.num()) : base;
      auto p = b.checked_pow(e < 0 ? -e : e);
      if (!p) throw std::invalid_argument("delta grid power overflows exact rationals");
      out.push_back(*p);
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                  : comma - pos);
    if (!tok.empty()) out.push_back(Ratio::parse(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty grid '" + text + "'");
  return out;
}

LoadedSpec load_validated(const std::string& path) {
  LoadedSpec spec = load_spec_file(path);
  ValidationReport report =
      spec.moran() ? validate(*spec.moran()) : validate(*spec.cantor());
  if (!report.ok()) {
    std::cerr << to_text(report);
    std::exit(kExitValidation);
  }
  return spec;
}

RealizeOptions realize_opts(const std::string& placement, double gamma,
                            const std::string& sign_mode, std::uint64_t seed,
                            std::uint64_t spec_hash) {
  RealizeOptions o;
  if (placement == "uniform-gap")
    o.placement = Placement::UniformGap;
  else if (placement == "left-packed")
    o.placement = Placement::LeftPacked;
  else
    throw std::invalid_argument("unknown placement '" + placement + "'");
  o.gamma = gamma;
  o.signs = sign_mode == "seeded" ? SignMode::Seeded : SignMode::Alternating;
  o.seed = seed;
  o.spec_hash = spec_hash;
  return o;
}

int run_validate(const CommonOpts& common) {
  LoadedSpec spec = load_spec_file(common.input);
  ValidationReport report =
      spec.moran() ? validate(*spec.moran()) : validate(*spec.cantor());
  std::cout << to_text(report);
  return report.ok() ? 0 : kExitValidation;
}

DimensionReport dims_report(const LoadedSpec& spec, const DimOptions& opt) {
  if (spec.moran()) return assouad_moran(*spec.moran(), opt);
  return assouad_cantor(*spec.cantor(), opt);
}

int run_dims(const CommonOpts& common, const DimOptions& opt) {
  LoadedSpec spec = load_validated(common.input);
  DimensionReport rep = dims_report(spec, opt);
  std::cout << report_text(rep, common.input);
  if (spec.moran() && spec.moran()->schedule.uniform_per_level()) {
    // ratio-form windows span m+1 levels; align window lengths with the
    // exponent-form trace
    DimOptions copt = opt;
    copt.m_max = std::max<std::uint64_t>(1, opt.m_max - 1);
    DimensionReport cor = uniform_corollary(*spec.moran(), copt);
    std::cout << "corollary cross-check:   " << fmt_double(cor.s_assouad) << "\n";
  }
  write_file(out_dir_of(common), "dims_trace.csv", theta_trace_csv(rep));
  if (!report_ordering_ok(rep))
    std::cout << "warning: estimate ordering outside provable bounds at this truncation\n";
  return 0;
}

int run_cutset(const CommonOpts& common, const std::string& delta_text,
               const std::string& base_text, std::uint64_t budget, double s_weight) {
  LoadedSpec spec = load_validated(common.input);
  if (!spec.moran()) {
    std::cerr << "cutset enumeration expects a moran spec\n";
    return kExitPrecondition;
  }
  Ratio delta = Ratio::parse(delta_text);
  std::vector<std::uint32_t> letters;
  if (!base_text.empty()) {
    std::size_t pos = 0;
    while (pos < base_text.size()) {
      auto dot = base_text.find('.', pos);
      letters.push_back(static_cast<std::uint32_t>(
          std::stoul(base_text.substr(pos, dot == std::string::npos ? std::string::npos
                                                                    : dot - pos))));
      if (dot == std::string::npos) break;
      pos = dot + 1;
    }
  }
  Word base = make_word(*spec.moran(), 0, letters);
  CutsetOptions copt;
  copt.budget = budget;
  Cutset cs = cutset(*spec.moran(), base, delta, copt);
  double residual = cutset_identity_residual(*spec.moran(), base, delta, s_weight, copt);
  std::cout << "cutset members: " << cs.members.size() << "\n"
            << "exact comparisons: " << (cs.exact ? "yes" : "no (log-space fallback)")
            << (cs.near_tie ? ", near-tie flagged" : "") << "\n"
            << "measure identity residual at s=" << fmt_double(s_weight) << ": "
            << fmt_double(residual) << "\n";
  write_file(out_dir_of(common), "cutset.csv", cutset_csv(cs));
  return 0;
}

int run_witness(const CommonOpts& common, std::uint64_t k_lo, std::uint64_t k_hi, double s,
                double eps) {
  LoadedSpec spec = load_validated(common.input);
  if (!spec.moran()) {
    std::cerr << "witness search expects a moran spec\n";
    return kExitPrecondition;
  }
  auto w = lower_bound_witness(*spec.moran(), k_lo, k_hi, s, eps);
  if (!w) {
    std::cerr << "no dyadic class satisfied the witness inequality "
                 "(unexpected for an admissible window)\n";
    return kExitInternal;
  }
  std::cout << "witness class q=" << w->q << " count=" << w->count
            << " lhs_log=" << fmt_double(w->lhs_log) << " rhs_log=" << fmt_double(w->rhs_log)
            << "\n";
  DyadicClasses cls = dyadic_classes(*spec.moran(), k_lo, k_hi);
  write_file(out_dir_of(common), "classes.csv", classes_csv(cls));
  return 0;
}

int run_empirical(const CommonOpts& common, const EstimatorOptions& opt) {
  LoadedSpec spec = load_validated(common.input);
  EstimatorResult res = spec.moran() ? empirical_assouad(*spec.moran(), opt)
                                     : empirical_assouad(*spec.cantor(), opt);
  std::cout << "empirical dim_A estimate (t at smallest rho): " << fmt_double(res.estimate)
            << "\n";
  for (const auto& [rho, t] : res.t_of_rho)
    std::cout << "  rho=" << fmt_double(rho) << "  t(rho)=" << fmt_double(t) << "\n";
  for (const auto& n : res.notes) std::cout << "note: " << n << "\n";
  write_file(out_dir_of(common), "empirical.csv", estimator_csv(res));
  return 0;
}

int run_scale(const CommonOpts& common, std::uint64_t depth,
              const std::vector<double>& rho_grid, std::vector<double> r_grid) {
  LoadedSpec spec = load_validated(common.input);
  if (!spec.cantor()) {
    std::cerr << "scale functions are generated from cantor_like specs\n";
    return kExitPrecondition;
  }
  ScaleFunction h = scale_from_cantor(*spec.cantor(), depth);
  if (r_grid.empty()) r_grid = {1.0, std::exp(-h.floor_x())};
  ScaleEstimate est = assouad_from_scale(h, rho_grid, r_grid);
  std::cout << "scale pieces: " << h.pieces() << " (floor log r = "
            << fmt_double(-h.floor_x()) << ")\n"
            << "dim_A via scale function: " << fmt_double(est.estimate) << "\n";
  if (est.clipped_to_floor)
    std::cout << "note: sup range clipped to the truncation floor\n";
  write_file(out_dir_of(common), "scale.csv", scale_csv(h));
  write_file(out_dir_of(common), "psi_table.csv", psi_table_csv(est));
  return 0;
}

int run_compare(const CommonOpts& common, const DimOptions& dopt, EstimatorOptions eopt,
                std::uint64_t depth) {
  LoadedSpec spec = load_validated(common.input);
  DimensionReport formula = dims_report(spec, dopt);

  EstimatorResult emp = spec.moran() ? empirical_assouad(*spec.moran(), eopt)
                                     : empirical_assouad(*spec.cantor(), eopt);

  bool have_scale = false;
  double scale_est = 0.0;
  if (spec.cantor()) {
    ScaleFunction h = scale_from_cantor(*spec.cantor(), depth);
    ScaleEstimate se = assouad_from_scale(h, eopt.rho_grid,
                                          {1.0, std::exp(-h.floor_x())});
    scale_est = se.estimate;
    have_scale = true;
  } else if (spec.moran()->schedule.uniform_per_level() && spec.moran()->d == 1) {
    CantorLikeSpec as_cantor;
    as_cantor.schedule = spec.moran()->schedule;
    ScaleFunction h = scale_from_cantor(as_cantor, depth);
    ScaleEstimate se = assouad_from_scale(h, eopt.rho_grid,
                                          {1.0, std::exp(-h.floor_x())});
    scale_est = se.estimate;
    have_scale = true;
  }

  std::cout << "route,dim_A_estimate\n";
  std::cout << "formula," << fmt_double(formula.s_assouad) << "\n";
  std::cout << "empirical," << fmt_double(emp.estimate) << "\n";
  if (have_scale)
    std::cout << "scale," << fmt_double(scale_est) << "\n";
  else
    std::cout << "scale,n/a\n";
  return 0;
}

int run_overlap(const CommonOpts& common, const std::string& delta_grid,
                const RealizeOptions& ropt, int centers, std::uint64_t seed) {
  LoadedSpec spec = load_validated(common.input);
  if (!spec.moran()) {
    std::cerr << "overlap bound expects a moran spec\n";
    return kExitPrecondition;
  }
  std::vector<Ratio> deltas = parse_ratio_grid(delta_grid);
  OverlapResult res = overlap_bound(*spec.moran(), ropt, deltas, centers, seed);
  std::cout << "max overlap across deltas: " << res.max_overlap << "\n";
  for (const auto& [d, n] : res.per_delta)
    std::cout << "  delta=" << fmt_double(d) << "  max=" << n << "\n";
  write_file(out_dir_of(common), "overlap.csv", overlap_csv(res));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimension toolkit for Moran and Cantor-like constructions"};
  app.require_subcommand(1);

  CommonOpts common;
  DimOptions dopt;
  std::string rho_grid_text = "3^-2..-6";
  std::string r_grid_text = "3^-1..-4";
  std::string delta_grid_text = "3^-2..-8";
  std::string placement = "uniform-gap";
  std::string sign_mode = "alternating";
  double gamma = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t depth = 60;
  int centers = 8;
  std::string delta_text = "1/10";
  std::string base_text;
  std::uint64_t budget = 10'000'000;
  double s_weight = 0.5;
  std::uint64_t k_lo = 0, k_hi = 4;
  double s_val = 0.3, eps = 0.1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("input", common.input, "spec file (JSON)")->required();
    cmd->add_option("--out", common.out_dir, "output directory (default $MORANDIM_OUT or .)");
    cmd->add_option("--tol", common.tol, "solver tolerance");
  };

  CLI::App* v = app.add_subcommand("validate", "check a spec against the structure conditions");
  add_common(v);

  CLI::App* d = app.add_subcommand("dims", "Hausdorff/packing/Assouad estimates");
  add_common(d);
  d->add_option("--m-max", dopt.m_max, "theta window horizon");
  d->add_option("--k-max", dopt.k_max, "window-start scan horizon (block programs)");
  d->add_option("--tail-horizon", dopt.tail_horizon, "s_{0,m} horizon for s*/s^*");

  CLI::App* cs = app.add_subcommand("cutset", "enumerate a delta-cutset");
  add_common(cs);
  cs->add_option("--delta", delta_text, "threshold, e.g. 1/20")->required();
  cs->add_option("--base", base_text, "base word letters, e.g. 1.2.1");
  cs->add_option("--budget", budget, "enumeration budget");
  cs->add_option("--s", s_weight, "exponent for the identity residual");

  CLI::App* w = app.add_subcommand("witness", "dyadic lower-bound witness");
  add_common(w);
  w->add_option("--k-lo", k_lo, "window start")->required();
  w->add_option("--k-hi", k_hi, "window end")->required();
  w->add_option("--s", s_val, "exponent below s_{k_lo,k_hi}")->required();
  w->add_option("--eps", eps, "witness epsilon");

  CLI::App* e = app.add_subcommand("empirical", "covering-number estimate of dim_A");
  add_common(e);
  e->add_option("--rho-grid", rho_grid_text, "rho grid: list or B^E1..E2");
  e->add_option("--r-grid", r_grid_text, "R grid: list or B^E1..E2");
  e->add_option("--centers", centers, "centers per R");
  e->add_option("--depth", depth, "max realization depth");
  e->add_option("--placement", placement, "uniform-gap | left-packed");
  e->add_option("--gamma", gamma, "uniform-gap slack share");
  e->add_option("--sign-mode", sign_mode, "alternating | seeded");
  e->add_option("--seed", seed, "seed for seeded perturbation signs");

  CLI::App* sc = app.add_subcommand("scale", "scale-function route to dim_A");
  add_common(sc);
  sc->add_option("--depth", depth, "truncation depth");
  sc->add_option("--rho-grid", rho_grid_text, "rho grid");
  CLI::Option* sc_rgrid =
      sc->add_option("--r-grid", r_grid_text, "R grid (defaults to the represented range)");

  CLI::App* cp = app.add_subcommand("compare", "formula vs empirical vs scale-function");
  add_common(cp);
  cp->add_option("--m-max", dopt.m_max, "theta horizon");
  cp->add_option("--k-max", dopt.k_max, "scan horizon");
  cp->add_option("--depth", depth, "scale truncation / max realization depth");
  cp->add_option("--rho-grid", rho_grid_text, "rho grid");
  cp->add_option("--r-grid", r_grid_text, "R grid");
  cp->add_option("--centers", centers, "centers per R");
  cp->add_option("--placement", placement, "uniform-gap | left-packed");
  cp->add_option("--gamma", gamma, "uniform-gap slack share");
  cp->add_option("--seed", seed, "realization seed");

  CLI::App* ov = app.add_subcommand("overlap", "cutset overlap bound across deltas");
  add_common(ov);
  ov->add_option("--delta-grid", delta_grid_text, "delta ladder");
  ov->add_option("--centers", centers, "sampled centers (0 = all)");
  ov->add_option("--placement", placement, "uniform-gap | left-packed");
  ov->add_option("--gamma", gamma, "uniform-gap slack share");
  ov->add_option("--seed", seed, "center sampling seed");

  CLI11_PARSE(app, argc, argv);

  try {
    dopt.tol = common.tol;
    if (v->parsed()) return run_validate(common);
    if (d->parsed()) return run_dims(common, dopt);
    if (cs->parsed()) return run_cutset(common, delta_text, base_text, budget, s_weight);
    if (w->parsed()) return run_witness(common, k_lo, k_hi, s_val, eps);
    if (e->parsed() || cp->parsed() || ov->parsed() || sc->parsed()) {
      EstimatorOptions eopt;
      eopt.rho_grid = parse_grid(rho_grid_text);
      eopt.R_grid = parse_grid(r_grid_text);
      eopt.centers_per_R = centers;
      eopt.max_depth = depth;
      std::uint64_t spec_hash = 0;
      {
        LoadedSpec probe = load_spec_file(common.input);
        spec_hash = probe.hash;
      }
      eopt.realize = realize_opts(placement, gamma, sign_mode, seed, spec_hash);
      if (e->parsed()) return run_empirical(common, eopt);
      if (sc->parsed())
        return run_scale(common, depth, eopt.rho_grid,
                         sc_rgrid->count() ? eopt.R_grid : std::vector<double>{});
      if (cp->parsed()) return run_compare(common, dopt, eopt, depth);
      return run_overlap(common, delta_grid_text, eopt.realize, centers, seed);
    }
  } catch (const SpecParseError& ex) {
    std::cerr << "parse error: " << ex.what() << "\n";
    return kExitParse;
  } catch (const BudgetError& ex) {
    std::cerr << "budget exceeded: " << ex.what() << "\n";
    return kExitBudget;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "precondition: " << ex.what() << "\n";
    return kExitPrecondition;
  } catch (const std::out_of_range& ex) {
    std::cerr << "range: " << ex.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& ex) {
    std::cerr << "internal error: " << ex.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
