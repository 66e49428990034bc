// Command-line surface for the homogenization-rate laboratory.
//
// Exit codes: 0 success, 2 precondition refusal, 1 runtime error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hjhom/effective.hpp"
#include "hjhom/engine.hpp"
#include "hjhom/errors.hpp"
#include "hjhom/game.hpp"
#include "hjhom/grid.hpp"
#include "hjhom/hopf_lax.hpp"
#include "hjhom/rate.hpp"
#include "hjhom/solver.hpp"

namespace {

using namespace hjhom;

std::vector<double> parse_csv_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

Vec3 parse_vec(const std::string& s) {
  std::vector<double> v = parse_csv_list(s);
  Vec3 x{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < v.size() && k < 3; ++k) x[k] = v[k];
  return x;
}

BumpProfile profile_for(const std::string& name, int dim) {
  if (name == "paper") return paper_profile();
  if (name == "experiments")
    return dim == 2 ? experiments_profile_2d() : experiments_profile_3d();
  throw PreconditionError("unknown profile: " + name);
}

void print_value(const char* label, double v) {
  std::printf("%s%.17g\n", label, v);
}

int run_hamiltonian_eval(const std::string& example,
                         const std::string& x_str, const std::string& p_str,
                         const std::string& profile_name) {
  Vec3 x = parse_vec(x_str);
  Vec3 p = parse_vec(p_str);
  if (example == "2d") {
    BumpProfile prof = profile_for(profile_name, 2);
    print_value("H = ", hamiltonian_closed_form_2d(x, p, prof));
  } else if (example == "3d") {
    BumpProfile prof = profile_for(profile_name, 3);
    print_value("H = ", hamiltonian_closed_form_3d(x, p, prof));
  } else {
    throw PreconditionError("unknown example: " + example);
  }
  return 0;
}

int run_isaacs_check(const std::string& example, int samples, int res,
                     std::uint64_t seed) {
  GameSpec game = example == "2d" ? make_game_2d(paper_profile())
                                  : make_game_3d(paper_profile());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  std::uniform_real_distribution<double> up(-20.0, 20.0);
  double max_gap = 0.0, max_delta = 0.0, max_closed_err = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec3 x{ux(rng), ux(rng), game.dim >= 3 ? ux(rng) : 0.0};
    Vec3 p{up(rng), up(rng), game.dim >= 3 ? up(rng) : 0.0};
    OracleResult coarse = hamiltonian_minmax_both(game, x, p, res);
    OracleResult fine = hamiltonian_minmax_both(game, x, p, 2 * res);
    double gap = std::fabs(coarse.upper - coarse.lower);
    double delta = std::max(std::fabs(fine.upper - coarse.upper),
                            std::fabs(fine.lower - coarse.lower));
    double closed = hamiltonian(game, x, p);
    max_gap = std::max(max_gap, gap);
    max_delta = std::max(max_delta, delta);
    max_closed_err = std::max(max_closed_err,
                              std::fabs(closed - coarse.upper));
  }
  std::printf("samples          %d\n", samples);
  std::printf("res              %d\n", res);
  print_value("max |H+ - H-|  = ", max_gap);
  print_value("refine delta   = ", max_delta);
  print_value("closed vs orc  = ", max_closed_err);
  bool ok = max_gap <= 2.0 * max_delta + 1e-9;
  std::printf("isaacs gap within 2x refinement delta: %s\n",
              ok ? "yes" : "NO");
  return 0;
}

int run_simulate(double eps, const std::string& pi_name,
                 const std::string& pii_name, double T, double dt_denom,
                 const std::string& profile_name, const std::string& out) {
  BumpProfile prof = profile_for(profile_name, 2);
  GameSpec game = make_game_2d(prof);
  double dt = eps / dt_denom;
  auto fi = make_policy_i(pi_name);
  auto fii = make_policy_ii(pii_name);
  auto pi = fi.make(game, eps, dt);
  auto pii = fii.make(game, eps, dt);
  IntegrateOptions opt;
  opt.record_stride = 1;
  Trajectory tr = integrate(game, eps, *pi, *pii, T, dt, opt);
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out);
    write_trajectory_csv(f, game, tr);
  }
  print_value("running cost  = ", tr.running_cost);
  print_value("terminal cost = ", tr.terminal_cost);
  print_value("total cost    = ", tr.total_cost());
  std::printf("switches      = %d\n", tr.switch_count);
  return 0;
}

int run_rate(RunConfig cfg, const std::string& out,
             const std::string& plot) {
  RateReport report = rate_sweep(cfg);
  emit_report(report, out, plot);
  std::printf("method     %s (%s profile)\n", report.method.c_str(),
              report.profile_name.c_str());
  for (const auto& pt : report.points) {
    if (pt.ok)
      std::printf("  eps %.10g  value %.10g  value/sqrt(eps) %.10g\n",
                  pt.eps, pt.value, pt.value / std::sqrt(pt.eps));
    else
      std::printf("  eps %.10g  FAILED: %s\n", pt.eps, pt.note.c_str());
  }
  std::printf("fit: slope %.6f  intercept %.6f  R2 %.6f\n",
              report.fit.slope, report.fit.intercept, report.fit.r2);
  std::printf("bracket constants: min %.6g  max %.6g\n", report.bracket_min,
              report.bracket_max);
  for (double e : report.excluded_eps)
    std::printf("excluded from fit (pre-asymptotic): eps %.10g\n", e);
  return 0;
}

int run_effective(const std::string& p_str, const std::string& method,
                  double T, int resolution) {
  Vec3 p = parse_vec(p_str);
  HbarMethod m;
  if (method == "game")
    m = HbarMethod::Game;
  else if (method == "pde")
    m = HbarMethod::Pde;
  else if (method == "formula")
    m = HbarMethod::Formula;
  else
    throw PreconditionError("unknown effective method: " + method);
  HbarEstimate est = hbar_estimate(p, m, T, resolution);
  print_value("hbar estimate = ", est.value);
  print_value("fit residual  = ", est.residual);
  print_value("formula value = ", hbar_formula_3d(p));
  return 0;
}

int run_solve_micro(double eps, const std::string& profile_name, int n,
                    double L, double T, const std::string& out,
                    const std::string& out_bin) {
  BumpProfile prof = profile_for(profile_name, 2);
  if (n <= 0)
    n = static_cast<int>(std::ceil(2.0 * L / (eps * prof.width / 4.0)));
  MicroSolveResult res = solve_micro_2d(prof, eps, T, n, L);
  print_value("u_eps(T, 0) = ", res.value_at_origin);
  std::printf("grid N = %d, steps = %d, dt = %.6g\n", n, res.steps, res.dt);
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out);
    write_field_csv(f, res.field);
  }
  if (!out_bin.empty()) {
    std::ofstream f(out_bin, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out_bin);
    write_field_bin(f, res.field);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for slow periodic homogenization of "
               "Hamilton-Jacobi equations"};
  app.require_subcommand(1);
  app.set_config("--config");

  // hamiltonian eval
  auto* ham = app.add_subcommand("hamiltonian", "closed-form Hamiltonians");
  auto* ham_eval = ham->add_subcommand("eval", "evaluate H(x, p)");
  std::string ham_example = "2d", ham_x = "0,0,0", ham_p = "0,0,0";
  std::string ham_profile = "paper";
  ham_eval->add_option("--example", ham_example, "2d|3d");
  ham_eval->add_option("--x", ham_x, "state, comma separated");
  ham_eval->add_option("--p", ham_p, "momentum, comma separated");
  ham_eval->add_option("--profile", ham_profile, "paper|experiments");

  // isaacs-check
  auto* isa = app.add_subcommand("isaacs-check",
                                 "min-max vs max-min oracle audit");
  std::string isa_example = "2d";
  int isa_samples = 20, isa_res = 100;
  std::uint64_t isa_seed = 1;
  isa->add_option("--example", isa_example, "2d|3d");
  isa->add_option("--samples", isa_samples, "number of random (x, p)");
  isa->add_option("--res", isa_res, "oracle resolution");
  isa->add_option("--seed", isa_seed, "rng seed");

  // simulate
  auto* sim = app.add_subcommand("simulate", "integrate one 2D trajectory");
  std::string sim_example = "2d";
  double sim_eps = 1e-4, sim_T = 1.0, sim_dtden = 200.0;
  std::string sim_pi = "highway", sim_pii = "adversarial";
  std::string sim_profile = "paper", sim_out;
  sim->add_option("--example", sim_example, "2d");
  sim->add_option("--eps", sim_eps, "scale eps");
  sim->add_option("--policy-i", sim_pi, "highway|stay|home");
  sim->add_option("--policy-ii", sim_pii,
                  "adversarial|zero|push|random:SEED");
  sim->add_option("--T", sim_T, "horizon");
  sim->add_option("--dt-denom", sim_dtden, "dt = eps / this");
  sim->add_option("--profile", sim_profile, "paper|experiments");
  sim->add_option("--out", sim_out, "trajectory CSV path");

  // rate
  auto* rate = app.add_subcommand("rate", "epsilon sweep with log-log fit");
  RunConfig cfg;
  std::string rate_eps_list = "0.0009765625,0.000244140625,6.103515625e-05,"
                              "1.52587890625e-05,3.814697265625e-06";
  std::string rate_out = "rate.csv", rate_plot = "rate.svg";
  rate->add_option("--method", cfg.method, "game-upper|game-lower|pde");
  rate->add_option("--profile", cfg.profile, "paper|experiments");
  rate->add_option("--eps-list", rate_eps_list, "comma separated eps values");
  rate->add_option("--dt-denom", cfg.dt_denominator, "dt = eps / this");
  rate->add_option("--grid", cfg.grid_n, "pde grid N (0 = auto)");
  rate->add_option("--L", cfg.grid_L, "pde half-width L");
  rate->add_option("--T", cfg.T, "horizon");
  rate->add_option("--seed", cfg.seed, "rng seed");
  rate->add_option("--out", rate_out, "CSV output path");
  rate->add_option("--plot", rate_plot, "SVG output path");

  // effective
  auto* eff = app.add_subcommand("effective",
                                 "effective Hamiltonian estimates");
  std::string eff_p = "1,0,0", eff_method = "game";
  double eff_T = 100.0;
  int eff_res = 40;
  eff->add_option("--p", eff_p, "momentum p1,p2,p3");
  eff->add_option("--method", eff_method, "game|pde|formula");
  eff->add_option("--T", eff_T, "corrector horizon");
  eff->add_option("--resolution", eff_res, "pde grid N per axis");

  // solve-micro
  auto* mic = app.add_subcommand("solve-micro",
                                 "LF solve of the 2D microscopic problem");
  double mic_eps = 0.25, mic_L = 5.0, mic_T = 1.0;
  int mic_n = 0;
  std::string mic_profile = "experiments", mic_out, mic_out_bin;
  mic->add_option("--eps", mic_eps, "scale eps");
  mic->add_option("--profile", mic_profile, "paper|experiments");
  mic->add_option("--grid", mic_n, "nodes per axis (0 = minimal legal)");
  mic->add_option("--L", mic_L, "domain half-width");
  mic->add_option("--T", mic_T, "horizon");
  mic->add_option("--out", mic_out, "field CSV path");
  mic->add_option("--out-bin", mic_out_bin, "field binary dump path");

  for (auto* sub : {ham, isa, sim, rate, eff, mic})
    sub->set_config("--config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ham_eval->parsed())
      return run_hamiltonian_eval(ham_example, ham_x, ham_p, ham_profile);
    if (isa->parsed())
      return run_isaacs_check(isa_example, isa_samples, isa_res, isa_seed);
    if (sim->parsed()) {
      if (sim_example != "2d")
        throw hjhom::PreconditionError("simulate supports --example 2d");
      return run_simulate(sim_eps, sim_pi, sim_pii, sim_T, sim_dtden,
                          sim_profile, sim_out);
    }
    if (rate->parsed()) {
      cfg.eps_list = parse_csv_list(rate_eps_list);
      return run_rate(cfg, rate_out, rate_plot);
    }
    if (eff->parsed()) return run_effective(eff_p, eff_method, eff_T, eff_res);
    if (mic->parsed())
      return run_solve_micro(mic_eps, mic_profile, mic_n, mic_L, mic_T,
                             mic_out, mic_out_bin);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const hjhom::PreconditionError& e) {
    std::cerr << "precondition refused: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
