#include "msl/acceptance.hpp"
#include "msl/algebra.hpp"
#include "msl/embed.hpp"
#include "msl/geometry.hpp"
#include "msl/io.hpp"
#include "msl/linalg.hpp"
#include "msl/microstates.hpp"
#include "msl/rational.hpp"
#include "msl/rng.hpp"
#include "msl/tolerances.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace {

constexpr const char* kVersion = "0.1.0";

// exit codes: 0 success, 1 usage error, 2 invariant or certificate violation
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;

struct OutputSink {
  std::string out_dir;

  void write(const std::string& name, const std::string& content) const {
    if (out_dir.empty()) return;
    std::filesystem::create_directories(out_dir);
    msl::io::write_text_file(out_dir + "/" + name, content);
  }
};

msl::io::json report_envelope(const std::string& command, const msl::io::json& config,
                              std::uint64_t seed) {
  return {{"command", command}, {"config", config}, {"seed", seed}, {"version", kVersion}};
}

void print_rational(const char* label, const msl::Rational& value) {
  std::printf("%s = %s = %s\n", label, msl::to_fraction_string(value).c_str(),
              msl::to_decimal_string(value).c_str());
}

msl::geometry::TractableSubgroup parse_subgroup(const std::string& text, long k) {
  using msl::geometry::TractableSubgroup;
  if (text == "scalars") return TractableSubgroup::scalars(k);
  if (text == "torus") return TractableSubgroup::torus(k);
  if (text == "full") return TractableSubgroup::full(k);
  // "factors=2x2,1x1" with entries mult x size
  const std::string prefix = "factors=";
  if (text.rfind(prefix, 0) != 0) {
    throw CLI::ValidationError("--subgroup", "expected scalars|torus|full|factors=MxS,...");
  }
  std::vector<TractableSubgroup::Factor> factors;
  std::stringstream ss(text.substr(prefix.size()));
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto x = item.find('x');
    if (x == std::string::npos) {
      throw CLI::ValidationError("--subgroup", "factor entries look like MULTxSIZE");
    }
    factors.push_back({std::stol(item.substr(0, x)), std::stol(item.substr(x + 1))});
  }
  return TractableSubgroup(k, std::move(factors));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"msl: finite-dimensional laboratory for trace invariants, matrix embeddings "
               "and packing experiments on unitary orbits"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string spec_path, algebra_path, out_dir, target = "torus", subgroup_text = "scalars";
  long k = 2, trials = 100, budget = 2000, sweep_m = 1;
  int word_cap = 2;
  double r = 0.5, gamma = 0.05, tol_scale = 1.0;
  std::vector<double> eps_list;
  std::uint64_t seed = msl::kDefaultSeed;
  std::string format = "csv";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed (fixed default, never entropy)");
    cmd->add_option("--out", out_dir, "directory for report artifacts");
    cmd->add_option("--format", format, "csv or json-like artifacts")
        ->check(CLI::IsMember({"csv", "json-like"}));
  };

  auto* delta0_cmd = app.add_subcommand("delta0", "free entropy dimension of a hyperfinite spec");
  delta0_cmd->add_option("--spec", spec_path, "spec file")->required();
  add_common(delta0_cmd);

  auto* fdim_cmd = app.add_subcommand("fdim", "free dimension of a hyperfinite spec");
  fdim_cmd->add_option("--spec", spec_path, "spec file")->required();
  add_common(fdim_cmd);

  auto* capacity_cmd =
      app.add_subcommand("capacity", "capacity invariant of a finite dimensional algebra");
  capacity_cmd->add_option("--algebra", algebra_path, "algebra file")->required();
  add_common(capacity_cmd);

  auto* embed_cmd = app.add_subcommand("embed", "near-trace-preserving embedding into M_k");
  embed_cmd->add_option("--algebra", algebra_path, "algebra file")->required();
  embed_cmd->add_option("--k", k, "ambient matrix size")->required();
  embed_cmd->add_option("--r", r, "accuracy parameter in (0,1)");
  add_common(embed_cmd);

  auto* conj_cmd =
      app.add_subcommand("conjugate", "align two random representations and certify the bound");
  conj_cmd->add_option("--algebra", algebra_path, "algebra file")->required();
  conj_cmd->add_option("--k", k, "ambient matrix size")->required();
  conj_cmd->add_option("--trials", trials, "number of random pairs");
  add_common(conj_cmd);

  auto* qdist_cmd = app.add_subcommand("quotient-dist", "quotient metric between Haar unitaries");
  qdist_cmd->add_option("--k", k, "ambient matrix size")->required();
  qdist_cmd->add_option("--subgroup", subgroup_text, "scalars|torus|full|factors=MxS,...");
  qdist_cmd->add_option("--budget", budget, "probe budget for the d_inf bracket");
  add_common(qdist_cmd);

  auto* pack_cmd = app.add_subcommand("pack", "greedy packing/covering counts on a target space");
  pack_cmd->add_option("--target", target, "torus or orbit")
      ->check(CLI::IsMember({"torus", "orbit"}));
  pack_cmd->add_option("--m", sweep_m, "torus dimension (target torus)");
  pack_cmd->add_option("--k", k, "matrix size (target orbit)");
  pack_cmd->add_option("--subgroup", subgroup_text, "subgroup for orbit target");
  pack_cmd->add_option("--eps", eps_list, "epsilon grid (decreasing)")->required();
  pack_cmd->add_option("--budget", budget, "sample budget");
  add_common(pack_cmd);

  auto* volume_cmd = app.add_subcommand("volume", "ball volumes: closed form and Monte Carlo");
  volume_cmd->add_option("--d", k, "matrix size d")->required();
  volume_cmd->add_option("--trials", trials, "Monte Carlo samples");
  add_common(volume_cmd);

  auto* free_cmd = app.add_subcommand("freeness", "Haar-conjugation freeness experiment");
  free_cmd->add_option("--k", k, "matrix size");
  free_cmd->add_option("--m", word_cap, "monomial degree cap");
  free_cmd->add_option("--gamma", gamma, "defect threshold");
  free_cmd->add_option("--trials", trials, "number of Haar draws");
  add_common(free_cmd);

  auto* suite_cmd = app.add_subcommand("suite", "run the full verification battery");
  suite_cmd->add_option("--tol-scale", tol_scale, "scale all tolerances (<1 tightens)");
  add_common(suite_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    OutputSink sink{out_dir};

    if (*delta0_cmd || *fdim_cmd) {
      auto spec = msl::io::hyperfinite_spec_from_file(spec_path);
      msl::Rational value =
          *delta0_cmd ? msl::algebra::delta0_hyperfinite(spec) : msl::algebra::fdim(spec);
      print_rational(*delta0_cmd ? "delta0" : "fdim", value);
      auto report = report_envelope(*delta0_cmd ? "delta0" : "fdim",
                                    {{"spec", spec_path}}, seed);
      report["result"] = {{"fraction", msl::to_fraction_string(value)},
                          {"decimal", msl::to_decimal_string(value)}};
      sink.write("report.json", report.dump(2) + "\n");
      return kExitOk;
    }

    if (*capacity_cmd) {
      auto algebra = msl::io::algebra_from_file(algebra_path);
      msl::Rational value = msl::algebra::delta_capacity(algebra);
      print_rational("capacity", value);
      auto report = report_envelope("capacity", {{"algebra", algebra_path}}, seed);
      report["result"] = {{"fraction", msl::to_fraction_string(value)},
                          {"decimal", msl::to_decimal_string(value)}};
      sink.write("report.json", report.dump(2) + "\n");
      return kExitOk;
    }

    if (*embed_cmd) {
      auto algebra = msl::io::algebra_from_file(algebra_path);
      auto report = msl::embed::build_embedding(algebra, k, r);
      std::printf("k=%ld  multiplicities=[", k);
      for (std::size_t j = 0; j < report.representation.multiplicities.size(); ++j) {
        std::printf("%s%ld", j ? "," : "", report.representation.multiplicities[j]);
      }
      std::printf("]  null=%ld\n", report.representation.null_dim);
      std::printf("trace_error=%.12g  quotient_dim=%ld  bounds=(%.12g, %.12g)  k0=%ld%s\n",
                  report.trace_error, report.quotient_dim, report.lower_bound,
                  report.upper_bound, report.k0,
                  report.below_threshold ? "  [below threshold]" : "");
      auto envelope = report_envelope(
          "embed", {{"algebra", algebra_path}, {"k", k}, {"r", r}}, seed);
      envelope["result"] = msl::io::to_json(report);
      sink.write("report.json", envelope.dump(2) + "\n");
      return kExitOk;
    }

    if (*conj_cmd) {
      auto algebra = msl::io::algebra_from_file(algebra_path);
      msl::Rng rng = msl::derive_rng({seed, "cli-conjugate"}, 0);
      bool all_ok = true;
      double worst_excess = 0.0;
      for (long t = 0; t < trials; ++t) {
        auto random_rep = [&]() {
          std::vector<long> mult(algebra.num_blocks(), 0);
          long remaining = k;
          for (int j = 0; j < algebra.num_blocks(); ++j) {
            long cap = remaining / algebra.block_dims[j];
            if (cap > 0) mult[j] = static_cast<long>(rng.next_u64() % (cap + 1));
            remaining -= mult[j] * algebra.block_dims[j];
          }
          return msl::embed::Representation(algebra, mult, remaining);
        };
        auto [u, cert] = msl::embed::conjugate_representations(random_rep(), random_rep());
        (void)u;
        all_ok = all_ok && cert.bound_satisfied;
        worst_excess =
            std::max(worst_excess, cert.max_relative_distance - 2.0 * cert.epsilon);
      }
      std::printf("%ld trials: bound %s (worst excess %.3g)\n", trials,
                  all_ok ? "held" : "VIOLATED", worst_excess);
      auto envelope = report_envelope(
          "conjugate", {{"algebra", algebra_path}, {"k", k}, {"trials", trials}}, seed);
      envelope["result"] = {{"bound_held", all_ok}, {"worst_excess", worst_excess}};
      sink.write("report.json", envelope.dump(2) + "\n");
      return all_ok ? kExitOk : kExitViolation;
    }

    if (*qdist_cmd) {
      auto h = parse_subgroup(subgroup_text, k);
      msl::RNGSeed s{seed, "cli-quotient"};
      msl::Matrix u = msl::linalg::haar_unitary(static_cast<int>(k), s, 0);
      msl::Matrix v = msl::linalg::haar_unitary(static_cast<int>(k), s, 1);
      double d2 = msl::geometry::quotient_distance_d2(u, v, h);
      auto [lo, hi] = msl::geometry::quotient_distance_dinf(u, v, h, budget);
      std::printf("d2=%.12g  dinf in [%.12g, %.12g]\n", d2, lo, hi);
      auto envelope = report_envelope(
          "quotient-dist", {{"k", k}, {"subgroup", subgroup_text}, {"budget", budget}}, seed);
      envelope["result"] = {{"d2", d2}, {"dinf_lower", lo}, {"dinf_upper", hi}};
      sink.write("report.json", envelope.dump(2) + "\n");
      return kExitOk;
    }

    if (*pack_cmd) {
      std::vector<double> grid = eps_list;
      std::sort(grid.begin(), grid.end(), std::greater<double>());
      msl::geometry::PackingResult result;
      msl::RNGSeed s{seed, "cli-pack"};
      if (target == "torus") {
        long side = (sweep_m == 1) ? budget
                                   : static_cast<long>(std::llround(
                                         std::pow(static_cast<double>(budget),
                                                  1.0 / static_cast<double>(sweep_m))));
        side = std::max<long>(side, 2);
        struct Sweep {
          long m, side;
          std::vector<double> operator()(std::uint64_t index) const {
            std::vector<double> angles(m);
            for (long i = 0; i < m; ++i) {
              angles[i] = 2.0 * M_PI * static_cast<double>(index % side) / side;
              index /= side;
            }
            return angles;
          }
        };
        auto metric = [](const std::vector<double>& a, const std::vector<double>& b) {
          double worst = 0.0;
          for (std::size_t i = 0; i < a.size(); ++i) {
            worst = std::max(worst, 2.0 * std::abs(std::sin(0.5 * (a[i] - b[i]))));
          }
          return worst;
        };
        long total = 1;
        for (long i = 0; i < sweep_m; ++i) total *= side;
        result = msl::geometry::run_packing_experiment<std::vector<double>>(
            Sweep{sweep_m, side}, metric, grid, total, s);
      } else {
        auto h = parse_subgroup(subgroup_text, k);
        auto sampler = [&](std::uint64_t index) {
          return msl::linalg::haar_unitary(static_cast<int>(k), s, index);
        };
        auto metric = [&](const msl::Matrix& a, const msl::Matrix& b) {
          return msl::geometry::quotient_distance_d2(a, b, h);
        };
        result = msl::geometry::run_packing_experiment<msl::Matrix>(sampler, metric, grid,
                                                                    budget, s);
      }
      std::string csv = msl::io::to_csv(result);
      std::fputs(csv.c_str(), stdout);
      double residual = 0.0;
      double fit = msl::geometry::exponent_fit(result.epsilons, result.packing_counts,
                                               &residual);
      std::printf("fitted_exponent=%.6g residual=%.3g\n", fit, residual);
      sink.write("packing.csv", csv);
      auto envelope = report_envelope(
          "pack",
          {{"target", target}, {"m", sweep_m}, {"k", k}, {"budget", budget}, {"eps", grid}},
          seed);
      envelope["result"] = {{"fitted_exponent", fit}, {"residual", residual}};
      sink.write("report.json", envelope.dump(2) + "\n");
      // Certified sandwich; a breach is an invariant violation.
      for (std::size_t i = 0; i < result.epsilons.size(); ++i) {
        if (result.covering_counts[i] > result.packing_counts[i]) return kExitViolation;
      }
      return kExitOk;
    }

    if (*volume_cmd) {
      double theta = msl::geometry::ball_volume_theta(k);
      auto estimate =
          msl::geometry::estimate_opnorm_ball_volume(static_cast<int>(k), trials, {seed, "vol"});
      std::printf("theta_%ld=%.12g  lambda_%ld=%.12g (stderr %.3g)  ratio=%.6g\n", k, theta, k,
                  estimate.estimate, estimate.stderr_, estimate.estimate / theta);
      auto envelope = report_envelope("volume", {{"d", k}, {"trials", trials}}, seed);
      envelope["result"] = {{"theta", theta},
                            {"lambda", estimate.estimate},
                            {"stderr", estimate.stderr_},
                            {"ratio", estimate.estimate / theta}};
      sink.write("report.json", envelope.dump(2) + "\n");
      return kExitOk;
    }

    if (*free_cmd) {
      msl::Matrix projection = msl::Matrix::Zero(k, k);
      for (long i = 0; i < k / 2; ++i) projection(i, i) = 1.0;
      std::vector<double> defects;
      double frequency = msl::microstates::asymptotic_freeness_experiment(
          {projection}, {projection}, static_cast<int>(trials), word_cap, gamma,
          {seed, "cli-freeness"}, &defects);
      std::printf("frequency=%.6g over %ld trials (m=%d, gamma=%g, k=%ld)\n", frequency, trials,
                  word_cap, gamma, k);
      std::ostringstream csv;
      csv << "trial,defect,member\n";
      for (std::size_t i = 0; i < defects.size(); ++i) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%zu,%.12g,%d\n", i, defects[i],
                      defects[i] < gamma ? 1 : 0);
        csv << buf;
      }
      sink.write("freeness.csv", csv.str());
      auto envelope = report_envelope(
          "freeness",
          {{"k", k}, {"m", word_cap}, {"gamma", gamma}, {"trials", trials}}, seed);
      envelope["result"] = {{"frequency", frequency}};
      sink.write("report.json", envelope.dump(2) + "\n");
      return kExitOk;
    }

    if (*suite_cmd) {
      msl::acceptance::SuiteOptions options;
      options.seed = seed;
      options.tolerance_scale = tol_scale;
      auto results = msl::acceptance::run_all(options);
      std::ostringstream table;
      for (const auto& line : results) {
        std::string formatted = msl::acceptance::format_line(line);
        std::puts(formatted.c_str());
        table << formatted << "\n";
      }
      sink.write("suite.txt", table.str());
      return msl::acceptance::all_passed(results) ? kExitOk : kExitViolation;
    }
  } catch (const msl::geometry::SeparationError& e) {
    std::fprintf(stderr, "certificate violation: %s\n", e.what());
    return kExitViolation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
