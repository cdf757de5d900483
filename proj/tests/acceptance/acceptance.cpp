// Copyright 2026 The wagan Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite. Prints one PASS/FAIL line per criterion; with numeric
// arguments only those criteria run. Exit status is nonzero if any fail.

#include <Eigen/Core>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "../finite_diff.hpp"
#include "../kendall.hpp"
#include "wagan/aitchison.hpp"
#include "wagan/angular.hpp"
#include "wagan/autodiff.hpp"
#include "wagan/cli.hpp"
#include "wagan/csv.hpp"
#include "wagan/datagen.hpp"
#include "wagan/margins.hpp"
#include "wagan/metrics.hpp"
#include "wagan/sampler.hpp"
#include "wagan/wgan.hpp"

namespace {

using wagan::Matrix;
using wagan::Vector;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

Matrix gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = normal(rng);
  return m;
}

// Smallest |pre-activation| over the hidden layers for inputs x.
double kink_distance(const wagan::Mlp& net, const Matrix& x) {
  double best = std::numeric_limits<double>::infinity();
  Matrix h = x;
  const auto& layers = net.layers();
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    Matrix z = h * layers[l].weight;
    z.rowwise() += layers[l].bias.row(0);
    best = std::min(best, z.cwiseAbs().minCoeff());
    h = z.unaryExpr([](double v) { return wagan::ad::leaky_relu(v, wagan::kHiddenSlope); });
  }
  return best;
}

std::vector<Matrix> values_of(const wagan::Mlp& net) {
  std::vector<Matrix> out;
  for (const Matrix* p : net.parameters()) out.push_back(*p);
  return out;
}

wagan::Mlp with_values(wagan::Mlp net, const std::vector<Matrix>& v) {
  auto ps = net.parameters();
  for (std::size_t i = 0; i < ps.size(); ++i) *ps[i] = v[i];
  return net;
}

std::vector<Matrix> tape_gradients(wagan::ad::Tape& tape, wagan::ad::Var loss,
                                   const wagan::MlpVars& vars) {
  std::vector<Matrix> out;
  for (const auto& g : tape.grad(loss, vars.params)) out.push_back(g.value());
  return out;
}

// 1. First-order weight gradients of L_D and L_G and the gradient-penalty
//    term against central differences on 50 random networks.
Outcome autodiff_correctness() {
  using wagan::testing::central_differences;
  using wagan::testing::max_relative_error;
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> dim(2, 5), width(2, 7), depth(1, 3), batch(2, 6);
  double worst = 0.0;
  double worst_abs = 0.0;
  int nets = 0;
  while (nets < 50) {
    const int d = dim(rng);
    const int latent = dim(rng) - 1;
    std::vector<int> hd(static_cast<std::size_t>(depth(rng))), hg(static_cast<std::size_t>(depth(rng)));
    for (int& w : hd) w = width(rng);
    for (int& w : hg) w = width(rng);
    const auto params = wagan::init_networks(wagan::MlpSpec{latent, d - 1, hg},
                                             wagan::MlpSpec{d - 1, 1, hd}, rng());
    wagan::Mlp critic = params.discriminator;
    wagan::Mlp gen = params.generator;
    // Nonzero biases exercise every parameter.
    for (wagan::Mlp* net : {&critic, &gen}) {
      for (auto& layer : net->layers()) layer.bias = 0.3 * gaussian(1, layer.bias.cols(), rng);
    }
    const int m = batch(rng);
    const Matrix real = gaussian(m, d - 1, rng);
    const Matrix fake = gaussian(m, d - 1, rng);
    Matrix mixed(m, d - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < m; ++i) {
      const double u = unif(rng);
      mixed.row(i) = u * real.row(i) + (1.0 - u) * fake.row(i);
    }
    const Matrix z = gaussian(m, latent, rng);
    const Matrix gz = gen.forward(z);
    // Stay away from activation kinks, where finite differences are invalid.
    if (std::min({kink_distance(critic, real), kink_distance(critic, fake),
                  kink_distance(critic, mixed), kink_distance(gen, z),
                  kink_distance(critic, gz)}) < 1e-3) {
      continue;
    }
    ++nets;
    const double lambda = 5.0;
    const double rho = 2.0;
    const wagan::BasisMatrix basis(d);

    auto check = [&](const std::vector<Matrix>& analytic, const std::vector<Matrix>& numeric) {
      worst = std::max(worst, max_relative_error(analytic, numeric));
      for (std::size_t i = 0; i < analytic.size(); ++i) {
        worst_abs = std::max(worst_abs, (analytic[i] - numeric[i]).cwiseAbs().maxCoeff());
      }
    };
    auto loss_d = [&](const std::vector<Matrix>& p, bool penalty_only) {
      wagan::ad::Tape t;
      const auto l = wagan::discriminator_loss(t, wagan::bind(with_values(critic, p), t, true),
                                               real, fake, mixed, lambda);
      return penalty_only ? l.penalty.scalar() : l.total.scalar();
    };
    auto loss_g = [&](const std::vector<Matrix>& p) {
      wagan::ad::Tape t;
      return wagan::generator_loss(t, z, wagan::bind(with_values(gen, p), t, true),
                                   wagan::bind(critic, t, false), basis, rho)
          .total.scalar();
    };

    {
      wagan::ad::Tape t;
      const auto vars = wagan::bind(critic, t, true);
      const auto l = wagan::discriminator_loss(t, vars, real, fake, mixed, lambda);
      const auto g_total = tape_gradients(t, l.total, vars);
      const auto g_pen = tape_gradients(t, l.penalty, vars);
      check(g_total, central_differences([&](const auto& p) { return loss_d(p, false); },
                                         values_of(critic), 1e-6));
      check(g_pen, central_differences([&](const auto& p) { return loss_d(p, true); },
                                       values_of(critic), 1e-6));
    }
    {
      wagan::ad::Tape t;
      const auto vars = wagan::bind(gen, t, true);
      const auto l = wagan::generator_loss(t, z, vars, wagan::bind(critic, t, false), basis, rho);
      check(tape_gradients(t, l.total, vars), central_differences(loss_g, values_of(gen), 1e-6));
    }
  }
  return {worst < 1e-4, "max relative error " + sci(worst) + " (< 1e-4, floor 1e-8), max abs difference " +
                            sci(worst_abs) + " over 50 networks"};
}

// 2. Basis orthonormality, coordinate round trips, clr homomorphism.
Outcome aitchison_suite() {
  double basis_err = 0.0, trip_err = 0.0, hom_err = 0.0;
  std::mt19937_64 rng(202);
  std::gamma_distribution<double> gamma(0.8, 1.0);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (Eigen::Index d = 2; d <= 100; ++d) {
    const wagan::BasisMatrix basis(d);
    const Matrix& v = basis.matrix();
    basis_err = std::max(basis_err, (v.transpose() * v - Matrix::Identity(d - 1, d - 1))
                                        .cwiseAbs().maxCoeff());
    basis_err = std::max(basis_err, v.colwise().sum().cwiseAbs().maxCoeff());
    for (int rep = 0; rep < 10; ++rep) {
      Vector a(d), b(d), c(d - 1);
      for (Eigen::Index j = 0; j < d; ++j) {
        a(j) = gamma(rng) + 1e-9;
        b(j) = gamma(rng) + 1e-9;
      }
      for (Eigen::Index j = 0; j < d - 1; ++j) c(j) = normal(rng);
      const auto pa = wagan::SimplexPoint::normalized(a);
      const auto pb = wagan::SimplexPoint::normalized(b);
      trip_err = std::max(trip_err, (wagan::from_coordinates(wagan::to_coordinates(pa, basis), basis)
                                         .values() - pa.values()).cwiseAbs().maxCoeff());
      trip_err = std::max(trip_err, (wagan::to_coordinates(wagan::from_coordinates(c, basis), basis) - c)
                                        .cwiseAbs().maxCoeff());
      hom_err = std::max(hom_err, (wagan::clr(wagan::aitchison_add(pa, pb)) - wagan::clr(pa) -
                                   wagan::clr(pb)).cwiseAbs().maxCoeff());
    }
  }
  const bool pass = basis_err < 1e-12 && trip_err < 1e-10 && hom_err < 1e-12;
  return {pass, "basis " + sci(basis_err) + " (< 1e-12), round trip " + sci(trip_err) +
                    " (< 1e-10), homomorphism " + sci(hom_err) + " (< 1e-12)"};
}

// 3. w2_distance against the brute-force permutation optimum.
Outcome ot_oracle() {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> size(1, 6), dim(1, 4);
  double worst_obj = 0.0, worst_marg = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = size(rng);
    const int k = dim(rng);
    const Matrix a = gaussian(n, k, rng);
    const Matrix b = gaussian(n, k, rng);
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += (a.row(i) - b.row(p[static_cast<std::size_t>(i)])).squaredNorm();
      best = std::min(best, s);
    } while (std::next_permutation(p.begin(), p.end()));
    const double oracle = std::sqrt(best / n);
    worst_obj = std::max(worst_obj, std::abs(wagan::w2_distance(a, b) - oracle));
    const Vector u = Vector::Constant(n, 1.0 / n);
    const auto plan = wagan::ot_solve(wagan::squared_distance_matrix(a, b), u, u);
    worst_marg = std::max(worst_marg, (plan.plan.rowwise().sum() - u).cwiseAbs().maxCoeff());
    worst_marg = std::max(worst_marg, (plan.plan.colwise().sum().transpose() - u).cwiseAbs().maxCoeff());
  }
  return {worst_obj <= 1e-9 && worst_marg <= 1e-9,
          "max |W2 - brute force| " + sci(worst_obj) + ", max marginal error " +
              sci(worst_marg) + " over 200 instances (<= 1e-9)"};
}

// 4. GPD maximum likelihood on 10 000 draws.
Outcome gpd_consistency() {
  struct Case { double sigma, xi; };
  std::string detail;
  bool pass = true;
  std::uint64_t seed = 404;
  for (const Case c : {Case{2.0, 0.0}, Case{1.0, 0.5}, Case{1.0, -0.2}}) {
    std::mt19937_64 rng(seed++);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> y(10000);
    for (double& v : y) {
      const double p = unif(rng);
      v = c.xi == 0.0 ? -c.sigma * std::log1p(-p)
                      : c.sigma * (std::pow(1.0 - p, -c.xi) - 1.0) / c.xi;
      if (v <= 0.0) v = 1e-300;
    }
    const auto fit = wagan::gpd_fit(y);
    const bool ok = std::abs(fit.sigma - c.sigma) <= 0.1 && std::abs(fit.xi - c.xi) <= 0.05;
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + std::string("GPD(") + sci(c.sigma) + "," +
              sci(c.xi) + ") -> (" + sci(fit.sigma) + "," + sci(fit.xi) + ")";
  }
  return {pass, detail + " within (0.1, 0.05)"};
}

// 5. Kendall tau and pairwise extremal coefficients of the logistic sampler.
Outcome logistic_fidelity() {
  bool pass = true;
  std::string detail;
  std::uint64_t seed = 505;
  for (const double theta : {4.0 / 3.0, 2.0, 4.0}) {
    const Matrix x = wagan::sample_logistic({5, theta, 2.0, 10000, seed++});
    const double tau_true = 1.0 - 1.0 / theta;
    double tau_err = 0.0;
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) {
        tau_err = std::max(tau_err, std::abs(wagan::testing::kendall_tau(x.col(i), x.col(j)) - tau_true));
      }
    }
    const auto k = static_cast<std::size_t>(std::floor(std::sqrt(10000.0)));
    const auto ext = wagan::extreme_angles(wagan::pareto_standardize(x), k);
    double coef_err = 0.0;
    for (const auto& s : wagan::enumerate_subsets(5, 2).subsets) {
      coef_err = std::max(coef_err, std::abs(wagan::extremal_coefficient(ext.sample, s) -
                                             std::pow(2.0, 1.0 / theta)));
    }
    pass = pass && tau_err <= 0.02 && coef_err <= 0.15;
    detail += (detail.empty() ? "" : "; ") + std::string("theta ") + sci(theta) +
              ": tau err " + sci(tau_err) + ", coef err " + sci(coef_err);
  }
  return {pass, detail + " (tau <= 0.02, coef <= 0.15)"};
}

Matrix tail_of(const Matrix& x, const Vector& u) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if ((x.row(i).transpose().array() > u.array()).any()) keep.push_back(i);
  }
  Matrix out(static_cast<Eigen::Index>(keep.size()), x.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = x.row(keep[r]);
  return out;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() /
                       ("wagan_acceptance_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// metric/k -> value from an evaluate report.
std::map<std::string, double> read_report(const fs::path& f) {
  std::ifstream in(f);
  std::string line;
  std::getline(in, line);
  std::map<std::string, double> out;
  while (std::getline(in, line)) {
    std::stringstream row(line);
    std::string metric, k, value;
    std::getline(row, metric, ',');
    std::getline(row, k, ',');
    std::getline(row, value, ',');
    out[metric + "/" + k] = std::stod(value);
  }
  return out;
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = wagan::cli::run(args, out, err);
  if (code != 0) std::cerr << err.str();
  return code;
}

// 6. Scaled end-to-end reproduction through the command-line pipeline.
Outcome end_to_end() {
  const fs::path dir = scratch_dir("e2e");
  const auto p = [&](const char* f) { return (dir / f).string(); };
  // 40 000 true rows: the first half is a reference for the W2 baseline, the
  // second half is the test set.
  if (cli({"simulate", "--d", "10", "--theta", "2", "--n", "10000", "--seed", "61", "-o", p("train.csv")}) ||
      cli({"simulate", "--d", "10", "--theta", "2", "--n", "40000", "--seed", "62", "-o", p("truth.csv")})) {
    return {false, "simulation failed"};
  }
  const auto truth = wagan::read_csv(p("truth.csv"));
  const Matrix half_a = truth.values.topRows(20000);
  const Matrix half_b = truth.values.bottomRows(20000);
  wagan::write_csv(p("test.csv"), truth.header, half_b);

  const auto t0 = std::chrono::steady_clock::now();
  if (cli({"train", "--data", p("train.csv"), "--checkpoint", p("model.ckpt"), "--k1", "100",
           "--epochs", "5000", "--seed", "63"})) {
    return {false, "training failed"};
  }
  const double minutes =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 60.0;

  const auto train = wagan::read_csv(p("train.csv"));
  const auto fits = wagan::fit_margins(train.values, 100);
  Vector u(10);
  for (int j = 0; j < 10; ++j) u(j) = fits.margins[static_cast<std::size_t>(j)].threshold;
  const Matrix ref_tail = tail_of(half_a, u);
  const Matrix test_tail = tail_of(half_b, u);

  if (cli({"sample", "--checkpoint", p("model.ckpt"), "--data", p("train.csv"), "--k2", "100",
           "--count", std::to_string(ref_tail.rows()), "--seed", "64", "-o", p("gen.csv")}) ||
      cli({"evaluate", "--generated", p("gen.csv"), "--test", p("test.csv"), "--checkpoint",
           p("model.ckpt"), "--thresholds", p("gen.csv.margins.csv"), "--seed", "65", "-o",
           p("report.csv")})) {
    return {false, "sampling or evaluation failed"};
  }
  const auto report = read_report(p("report.csv"));
  const double score = report.at("dependence_score/mean");
  const double w2 = report.at("w2_extremes/tail");
  const double baseline = wagan::w2_distance(ref_tail, test_tail);
  fs::remove_all(dir);
  const bool pass = score <= 0.05 && w2 <= 2.0 * baseline;
  return {pass, "dependence score " + sci(score) + " (<= 0.05); W2 " + sci(w2) +
                    " vs baseline " + sci(baseline) + " (ratio " + sci(w2 / baseline) +
                    ", <= 2); training " + sci(minutes) + " min"};
}

// 7. Tail sampler guarantees.
Outcome algorithm2() {
  const Matrix x = wagan::sample_logistic({5, 2.0, 2.0, 5000, 71});
  const auto fits = wagan::fit_margins(x, 70);
  const auto params = wagan::init_networks(wagan::MlpSpec{4, 4, {16}}, wagan::MlpSpec{4, 1, {16}}, 72);
  const auto tail = wagan::sample_tail(params.generator, wagan::BasisMatrix(5), fits, 70, 20000, 73);
  Eigen::Index exceeding = 0;
  for (Eigen::Index i = 0; i < tail.rows.rows(); ++i) {
    exceeding += (tail.rows.row(i).transpose().array() > tail.thresholds.array()).any();
  }
  bool monotone = true;
  for (const auto& m : fits.margins) {
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 100000; ++i) {
      const double v = wagan::back_transform(10.0 * i / 100000.0, m, 70);
      monotone = monotone && v >= prev;
      prev = v;
    }
  }
  const wagan::AngleSource center = [](std::size_t count, std::mt19937_64&) {
    return Matrix(Matrix::Constant(static_cast<Eigen::Index>(count), 2, 0.5));
  };
  const auto fits2 = wagan::fit_margins(x.leftCols(2), 70);
  const auto c = wagan::sample_tail(center, fits2, 70, 50000, 74);
  const double rate = 50000.0 / static_cast<double>(c.proposals);
  const bool pass = exceeding == tail.rows.rows() && monotone && rate >= 0.49 && rate <= 0.51;
  return {pass, std::to_string(exceeding) + "/" + std::to_string(tail.rows.rows()) +
                    " rows exceed a threshold; seam monotone: " + (monotone ? "yes" : "no") +
                    "; center acceptance " + sci(rate) + " over " + std::to_string(c.proposals) +
                    " proposals ([0.49, 0.51])"};
}

std::string slurp(const fs::path& f) {
  std::ifstream in(f, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 8. Byte-identical re-runs of every command.
Outcome determinism() {
  std::vector<fs::path> dirs{scratch_dir("det_a"), scratch_dir("det_b")};
  for (const fs::path& dir : dirs) {
    const auto p = [&](const char* f) { return (dir / f).string(); };
    if (cli({"simulate", "--d", "4", "--n", "3000", "--seed", "81", "-o", p("train.csv")}) ||
        cli({"simulate", "--d", "4", "--n", "3000", "--seed", "82", "-o", p("test.csv")}) ||
        cli({"train", "--data", p("train.csv"), "--checkpoint", p("m.ckpt"), "--epochs", "40",
             "--seed", "83"}) ||
        cli({"sample", "--checkpoint", p("m.ckpt"), "--data", p("train.csv"), "--count", "400",
             "--seed", "84", "-o", p("gen.csv")}) ||
        cli({"evaluate", "--generated", p("gen.csv"), "--test", p("test.csv"), "--checkpoint",
             p("m.ckpt"), "--thresholds", p("gen.csv.margins.csv"), "--seed", "85", "-o",
             p("report.csv"), "--coefficients", p("coef.csv")})) {
      return {false, "a command failed"};
    }
  }
  int files = 0;
  for (const auto& entry : fs::directory_iterator(dirs[0])) {
    const fs::path other = dirs[1] / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
      return {false, entry.path().filename().string() + " differs between runs"};
    }
    ++files;
  }
  for (const auto& d : dirs) fs::remove_all(d);
  return {files == 8, std::to_string(files) + " output files byte-identical across two runs"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"autodiff correctness", autodiff_correctness},
      {"aitchison suite", aitchison_suite},
      {"optimal transport oracle", ot_oracle},
      {"GPD MLE consistency", gpd_consistency},
      {"logistic generator fidelity", logistic_fidelity},
      {"end-to-end reproduction d=10", end_to_end},
      {"tail sampler guarantees", algorithm2},
      {"determinism", determinism},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);
  }
  int failures = 0;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::cout << "FAIL [" << id << "] unknown criterion\n";
      ++failures;
      continue;
    }
    const auto& [name, fn] = criteria[static_cast<std::size_t>(id - 1)];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << o.detail
              << " (" << sci(secs) << " s)" << std::endl;
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
