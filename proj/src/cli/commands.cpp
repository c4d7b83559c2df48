#include "vfsc/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "vfsc/bounds.hpp"
#include "vfsc/exact_analysis.hpp"
#include "vfsc/random_code.hpp"
#include "vfsc/randomizer.hpp"
#include "vfsc/rd_solver.hpp"
#include "vfsc/tunstall.hpp"
#include "vfsc/typicality.hpp"

namespace vfsc::cli {

namespace {

constexpr double kMaxMonteCarloLnM = 25.0;

SourceSpec source_of(const RunConfig& cfg) { return parse_pmf(cfg.get("pmf")); }
DistortionSpec distortion_of(const RunConfig& cfg) { return parse_distortion(cfg.get("dist")); }

std::size_t to_length(double x, const char* what) {
  if (!(x >= 1.0) || x != std::floor(x)) {
    throw ConfigError(std::string(what) + " must be a positive integer");
  }
  return static_cast<std::size_t>(x);
}

SlackPolicy slack_of(const RunConfig& cfg, double nprime) {
  if (const auto s = cfg.slack()) return SlackPolicy::override_pair(s->first, s->second);
  return SlackPolicy::asymptotic(nprime);
}

std::string slack_label(const RunConfig& cfg) {
  if (const auto s = cfg.slack()) {
    return "override(" + format_real(s->first) + "," + format_real(s->second) + ")";
  }
  return "asymptotic(gamma=sqrt(ln N'/N'))";
}

double cheby_or_nan(const InnerCodePlan& plan) {
  return plan.nprime > std::exp(1.0) ? achievable_error_bound(plan) : std::nan("");
}

}  // namespace

CsvTable cmd_rd(const RunConfig& cfg) {
  const auto src = source_of(cfg);
  const auto dist = distortion_of(cfg);
  const double tol = cfg.get_double("tol", 1e-10);
  CsvTable table({"D", "rate", "v_disp", "d_var"});
  table.add_metadata("command", "rd");
  for (double D : cfg.get_doubles("D")) {
    const auto pt = rd_at(src, dist, D, tol);
    table.add_row({format_real(D), format_real(pt.rate), format_real(pt.v_disp), format_real(pt.d_var)});
  }
  return table;
}

CsvTable cmd_simulate(const RunConfig& cfg, CsvTable* wrapped) {
  const auto src = source_of(cfg);
  const auto dist = distortion_of(cfg);
  const double D = cfg.get_double("D");
  const double epsilon = cfg.get_double("epsilon", 0.0);
  const bool exact_only = cfg.get_bool("exact_only", false);
  const double eta = cfg.get_double("eta", kDefaultEta);
  const auto grid = cfg.get_doubles("N");

  CsvTable exact({"n", "lnM", "q_lo", "q_hi", "nohit_lo", "nohit_hi", "cheby_bound", "ln_q_lo",
                  "ln_q_hi"});
  CsvTable mc({"n", "lnM", "D", "threshold", "trials", "excess_rate", "excess_ci", "psi_hit_rate",
               "mean_distortion", "seed", "per_codeword_hit_rate", "per_codeword_ci"});
  CsvTable& table = exact_only ? exact : mc;
  table.add_metadata("command", exact_only ? "simulate --exact-only" : "simulate");
  table.add_metadata("slack", slack_label(cfg));
  table.add_metadata("epsilon", format_real(epsilon));

  std::uint64_t seed = 0;
  std::size_t trials = 0;
  if (!exact_only) {
    seed = cfg.seed();
    trials = static_cast<std::size_t>(cfg.get_u64("trials"));
    if (trials == 0) throw ConfigError("trials must be >= 1");
    table.add_metadata("seed", format_uint(seed));
    table.add_metadata("codebook", "one fixed codebook per row, drawn from seed; stored when M*n <= 2^26 cells, else regenerated per row");
    table.add_metadata("eta", "n/a");
  } else {
    table.add_metadata("eta", format_real(eta));
  }
  if (wrapped != nullptr && epsilon > 0 && !exact_only) {
    *wrapped = CsvTable({"N", "epsilon", "delta", "L", "p", "mean_tau", "tau_lo", "tau_hi",
                         "excess_rate", "lnM", "rate"});
    wrapped->add_metadata("command", "simulate (wrapped)");
    wrapped->add_metadata("seed", format_uint(seed));
    wrapped->add_metadata("slack", slack_label(cfg));
  }

  for (std::size_t row = 0; row < grid.size(); ++row) {
    const double N = grid[row];
    std::optional<WrapperParams> params;
    std::size_t n = 0;
    if (epsilon > 0) {
      params = derive_params(N, epsilon, cfg.get_double("delta"));
      n = params->nprime;
    } else {
      n = to_length(N, "N");
    }
    const auto plan = plan_inner_code(src, dist, D, static_cast<double>(n), slack_of(cfg, static_cast<double>(n)));

    if (exact_only) {
      NoHitOptions opts;
      opts.seed = cfg.get_u64("seed", 0);
      const auto nh = no_hit_bound(src, plan.psi, n, plan.lnM, eta, opts);
      exact.add_row({format_uint(n), format_real(plan.lnM), format_real(nh.mean_q_lo),
                     format_real(nh.mean_q_hi), format_real(nh.lo), format_real(nh.hi),
                     format_real(cheby_or_nan(plan)), format_real(nh.ln_mean_q_lo),
                     format_real(nh.ln_mean_q_hi)});
      continue;
    }

    if (plan.lnM > kMaxMonteCarloLnM) {
      throw FeasibilityError("Monte Carlo feasibility guard: lnM = " + format_real(plan.lnM) +
                             " exceeds " + format_real(kMaxMonteCarloLnM) +
                             " at n = " + format_uint(n) + "; use --exact-only or a smaller slack");
    }
    const auto M = static_cast<std::size_t>(std::ceil(std::exp(std::max(0.0, plan.lnM))));
    const auto budget = static_cast<std::size_t>(cfg.get_u64("memory_budget", Codebook::kDefaultMemoryBudget));
    auto codebook = Codebook::generate(derive_seed(seed, 2 * row), M, n, plan.psi.channel.marginal, budget);
    const PsiEvaluator psi(plan.psi);
    const auto agg = run_trials(src, psi, codebook, trials, derive_seed(seed, 2 * row + 1));
    mc.add_row({format_uint(n), format_real(plan.lnM), format_real(D),
                format_real(plan.psi.iota_threshold_per_symbol), format_uint(trials),
                format_real(agg.excess.rate), format_real(agg.excess.radius()),
                format_real(agg.psi_hit.rate), format_real(agg.mean_distortion), format_uint(seed),
                format_real(agg.per_codeword.rate), format_real(agg.per_codeword.radius())});

    if (wrapped != nullptr && params) {
      const auto coin = build_coin_set(src, *params);
      const RandomInnerCode inner(std::move(codebook), psi, plan.lnM);
      const auto ws = wrapped_stats(src, *params, coin, inner, trials, derive_seed(seed, 0x5EED0000 + row));
      wrapped->add_row({format_real(N), format_real(epsilon), format_real(params->delta),
                        format_uint(ws.L), format_real(ws.p), format_real(ws.mean_tau),
                        format_real(ws.tau_lo), format_real(ws.tau_hi), format_real(ws.excess.rate),
                        format_real(ws.lnM), format_real(ws.rate)});
    }
  }
  return table;
}

CsvTable cmd_sweep(const RunConfig& cfg) {
  const auto src = source_of(cfg);
  const auto dist = distortion_of(cfg);
  const double D = cfg.get_double("D");
  const double epsilon = cfg.get_double("epsilon");
  if (!(epsilon > 0 && epsilon < 1)) throw ConfigError("epsilon must lie in (0,1)");
  const double eta = cfg.get_double("eta", kDefaultEta);
  const auto rd = rd_at(src, dist, D);
  const double B = cfg.get_double("B", default_converse_constant(rd));

  CsvTable table({"N", "Nprime", "epsilon", "D", "lnM", "achievable_rate", "converse_rate",
                  "fv_approx_rate", "theorem_rate", "excess_gap", "nohit_lo", "nohit_hi",
                  "cheby_bound", "B"});
  table.add_metadata("command", "sweep");
  table.add_metadata("slack", slack_label(cfg));
  table.add_metadata("B", format_real(B));
  table.add_metadata("fv_approx", "approximation: O(ln N) remainder omitted");
  const double theorem_rate = (1.0 - epsilon) * rd.rate;
  for (double N : cfg.get_doubles("N")) {
    const double nprime = std::round((1.0 - epsilon) * N);
    const auto plan = plan_inner_code(src, dist, D, nprime, slack_of(cfg, nprime));
    NoHitOptions opts;
    opts.seed = cfg.get_u64("seed", 0);
    const auto nh = no_hit_bound(src, plan.psi, static_cast<std::size_t>(nprime), plan.lnM, eta, opts);
    const double achievable = plan.lnM / N;
    table.add_row({format_real(N), format_real(nprime), format_real(epsilon), format_real(D),
                   format_real(plan.lnM), format_real(achievable),
                   format_real(converse_lnM(N, epsilon, rd, B) / N),
                   format_real(fv_lnM_approx(N, epsilon, rd) / N), format_real(theorem_rate),
                   format_real(achievable - theorem_rate), format_real(nh.lo), format_real(nh.hi),
                   format_real(cheby_or_nan(plan)), format_real(B)});
  }
  return table;
}

CsvTable cmd_bounds(const RunConfig& cfg) {
  const auto src = source_of(cfg);
  const auto dist = distortion_of(cfg);
  const double D = cfg.get_double("D");
  const double epsilon = cfg.get_double("epsilon");
  const auto rd = rd_at(src, dist, D);
  const double B = cfg.get_double("B", default_converse_constant(rd));
  CsvTable table({"N", "epsilon", "D", "converse", "fv_approx", "achievable", "theorem_rate_x_N", "B"});
  table.add_metadata("command", "bounds");
  table.add_metadata("B", format_real(B));
  table.add_metadata("koga_rate", format_real(koga_rate(src, epsilon)));
  for (double N : cfg.get_doubles("N")) {
    const double nprime = std::round((1.0 - epsilon) * N);
    const auto plan = plan_inner_code(src, dist, D, nprime, slack_of(cfg, nprime));
    const auto report = bound_report(src, N, epsilon, rd, B);
    table.add_row({format_real(N), format_real(epsilon), format_real(D),
                   format_real(report.converse_lnM), format_real(report.fv_lnM_approx),
                   format_real(plan.lnM), format_real(report.theorem_rate * N), format_real(B)});
  }
  return table;
}

CsvTable cmd_tunstall(const RunConfig& cfg) {
  const auto src = source_of(cfg);
  const std::uint64_t seed = cfg.seed();
  const auto symbols = static_cast<std::size_t>(cfg.get_u64("symbols", 1'000'000));
  const double h = entropy(src);
  CsvTable table({"M", "expected_len", "empirical_len", "rate", "entropy", "gap"});
  table.add_metadata("command", "tunstall");
  table.add_metadata("seed", format_uint(seed));
  table.add_metadata("symbols", format_uint(symbols));
  for (double m : cfg.get_doubles("M")) {
    const auto M = to_length(m, "M");
    const auto tree = build_tree(src, M);
    const auto stats = parse_stream(tree, src, symbols, derive_seed(seed, M));
    const double rate = tree.rate();
    table.add_row({format_uint(M), format_real(tree.expected_length()), format_real(stats.mean_length),
                   format_real(rate), format_real(h), format_real(rate - h)});
  }
  return table;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    CsvTable wrapped({});
    CsvTable table = [&] {
      if (cfg.command == "rd") return cmd_rd(cfg);
      if (cfg.command == "simulate") return cmd_simulate(cfg, &wrapped);
      if (cfg.command == "sweep") return cmd_sweep(cfg);
      if (cfg.command == "bounds") return cmd_bounds(cfg);
      if (cfg.command == "tunstall") return cmd_tunstall(cfg);
      throw ConfigError("unknown command '" + cfg.command + "' (rd | simulate | sweep | tunstall | bounds)");
    }();
    if (cfg.has("out")) {
      std::ofstream file(cfg.get("out"));
      if (!file) throw ConfigError("cannot open output file " + cfg.get("out"));
      table.write(file);
    } else {
      table.write(out);
    }
    if (cfg.has("wrapped_out") && wrapped.rows() > 0) {
      std::ofstream file(cfg.get("wrapped_out"));
      if (!file) throw ConfigError("cannot open output file " + cfg.get("wrapped_out"));
      wrapped.write(file);
    }
    return kExitOk;
  } catch (const FeasibilityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFeasibility;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace vfsc::cli
