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

#include "wagan/cli.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "wagan/aitchison.hpp"
#include "wagan/angular.hpp"
#include "wagan/csv.hpp"
#include "wagan/datagen.hpp"
#include "wagan/error.hpp"
#include "wagan/margins.hpp"
#include "wagan/metrics.hpp"
#include "wagan/sampler.hpp"
#include "wagan/wgan.hpp"

namespace wagan::cli {

std::size_t sqrt_rule(std::size_t n, Rounding rounding) {
  const double r = std::sqrt(static_cast<double>(n));
  double k = 0.0;
  switch (rounding) {
    case Rounding::kNearest: k = std::round(r); break;
    case Rounding::kFloor: k = std::floor(r); break;
    case Rounding::kCeil: k = std::ceil(r); break;
  }
  return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

namespace {

Rounding parse_rounding(const std::string& s) {
  if (s == "floor") return Rounding::kFloor;
  if (s == "ceil") return Rounding::kCeil;
  return Rounding::kNearest;
}

std::string fmt(double v) { return format_number(v); }

// Hyperparameters shared by training and the random search.
struct NetworkOptions {
  int width = 64;
  int depth = 2;
  int latent_dim = 0;           // 0: d - 1
  std::size_t batch_size = 0;   // 0: floor(K / batch_divisor)
  int batch_divisor = 10;
  double learning_rate = 1e-3;
  double beta1 = 0.5;
  double beta2 = 0.9;
  double lambda = 5.0;
  double rho = 1.0;
  int n_critic = 5;
  int epochs = 5000;
};

struct SimulateOptions {
  LogisticConfig config;
  std::string output;
};

struct TrainOptions {
  std::string data;
  std::string checkpoint;
  std::string log;
  std::size_t k1 = 0;
  std::string rounding = "nearest";
  std::uint64_t seed = 0;
  NetworkOptions net;
  int search = 0;
  std::string validation;
  std::string search_table;
  std::size_t angle_samples = 10000;
  std::size_t subset_cap = kDefaultSubsetCap;
};

struct SampleOptions {
  std::string checkpoint;
  std::string data;
  std::string output;
  std::string margins;
  std::size_t k2 = 0;
  std::string rounding = "nearest";
  std::size_t count = 1000;
  std::uint64_t seed = 0;
};

struct EvaluateOptions {
  std::string generated;
  std::string test;
  std::string checkpoint;
  std::string thresholds;
  std::string train;
  std::string output;
  std::string coefficients;
  std::size_t k1 = 0;
  std::size_t k2 = 0;
  std::string rounding = "nearest";
  double radial_threshold = 0.0;
  std::size_t angle_samples = 10000;
  std::size_t subset_cap = kDefaultSubsetCap;
  std::uint64_t seed = 0;
};

struct QqOptions {
  std::string data;
  std::string output;
  std::size_t k2 = 0;
  std::string rounding = "nearest";
};

void require_dims(const CsvTable& a, const CsvTable& b, const std::string& what) {
  if (a.values.cols() != b.values.cols()) {
    throw ShapeError(what + ": files have " + std::to_string(a.values.cols()) +
                     " and " + std::to_string(b.values.cols()) + " columns");
  }
}

Matrix rows_where(const Matrix& x, const std::vector<Eigen::Index>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = x.row(rows[r]);
  }
  return out;
}

// Rows with at least one coordinate above its threshold.
Matrix exceedances(const Matrix& x, const Vector& u) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if ((x.row(i).transpose().array() > u.array()).any()) keep.push_back(i);
  }
  return rows_where(x, keep);
}

Vector order_thresholds(const Matrix& x, std::size_t k2) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (k2 < 1 || k2 >= n) {
    throw ConfigError("k2 must satisfy 1 <= k2 < n (n = " + std::to_string(n) +
                      "), got " + std::to_string(k2));
  }
  Vector u(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    std::vector<double> col(x.col(j).data(), x.col(j).data() + n);
    std::nth_element(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(n - k2 - 1),
                     col.end());
    u(j) = col[n - k2 - 1];
  }
  return u;
}

struct Score {
  double value = 0.0;
  std::vector<DependenceScore> parts;
};

// {E(2) + E(3)} / 2, or E(2) alone when d = 2.
Score dependence(const AngularSample& generated, const AngularSample& reference,
                 std::size_t cap, std::uint64_t seed) {
  Score s;
  const int max_order = generated.dim() >= 3 ? 3 : 2;
  for (int k = 2; k <= max_order; ++k) {
    s.parts.push_back(dependence_score(generated, reference, k, cap, seed));
    s.value += s.parts.back().value;
  }
  s.value /= static_cast<double>(s.parts.size());
  return s;
}

void write_log(const std::string& path, const std::vector<EpochLog>& log) {
  CsvWriter w(path, {"epoch", "loss_discriminator", "loss_generator",
                     "gradient_penalty", "marginal_penalty"});
  for (const EpochLog& e : log) {
    w.row({std::to_string(e.epoch), fmt(e.loss_discriminator),
           fmt(e.loss_generator), fmt(e.gradient_penalty),
           fmt(e.marginal_penalty)});
  }
  w.close();
}

TrainConfig make_config(const NetworkOptions& net, std::size_t k1,
                        std::size_t pool, int d, std::uint64_t seed) {
  TrainConfig c;
  c.k1 = k1;
  c.lambda_gp = net.lambda;
  c.rho_marginal = net.rho;
  c.n_critic = net.n_critic;
  if (net.batch_size > 0) {
    c.batch_size = net.batch_size;
  } else {
    if (net.batch_divisor < 1) throw ConfigError("batch divisor must be >= 1");
    c.batch_size = std::max<std::size_t>(1, pool / static_cast<std::size_t>(net.batch_divisor));
  }
  c.adam = {net.learning_rate, net.beta1, net.beta2, 1e-8};
  c.latent_dim = net.latent_dim > 0 ? net.latent_dim : d - 1;
  c.n_epochs = net.epochs;
  c.seed = seed;
  c.validate();
  return c;
}

struct Candidate {
  NetworkOptions net;
  TrainConfig config;
  double score = std::numeric_limits<double>::infinity();
  bool diverged = false;
};

NetworkOptions draw_candidate(const NetworkOptions& base, std::size_t pool,
                              int d, std::mt19937_64& rng) {
  auto pick = [&rng](const auto& values) {
    std::uniform_int_distribution<std::size_t> u(0, std::size(values) - 1);
    return values[u(rng)];
  };
  static constexpr int kBatchDivisors[] = {1, 2, 4, 8, 16};
  static constexpr double kLatentDivisors[] = {0.25, 0.5, 0.75, 1.0, 2.0};
  static constexpr int kWidths[] = {32, 64, 128, 256, 512};
  static constexpr int kDepths[] = {1, 2, 4, 8};
  static constexpr double kRates[] = {0.01, 0.005, 0.001, 0.0005, 0.0001};
  static constexpr double kBetas[][2] = {{0.0, 0.9}, {0.5, 0.9}, {0.5, 0.99}};
  static constexpr double kLambdas[] = {0.1, 1, 3, 5, 7, 9};
  static constexpr double kRhos[] = {0.001, 0.01, 0.1, 1, 3};
  static constexpr int kCritics[] = {1, 3, 5, 10};

  NetworkOptions n = base;
  n.batch_size = std::max<std::size_t>(1, pool / static_cast<std::size_t>(pick(kBatchDivisors)));
  n.latent_dim = std::max(1, static_cast<int>(std::floor((d - 1) / pick(kLatentDivisors))));
  n.width = pick(kWidths);
  n.depth = pick(kDepths);
  n.learning_rate = pick(kRates);
  std::uniform_int_distribution<std::size_t> beta(0, 2);
  const std::size_t b = beta(rng);
  n.beta1 = kBetas[b][0];
  n.beta2 = kBetas[b][1];
  n.lambda = pick(kLambdas);
  n.rho = pick(kRhos);
  n.n_critic = pick(kCritics);
  return n;
}

// ---------------------------------------------------------------------------

void cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  o.config.validate();
  const Matrix x = sample_logistic(o.config);
  write_csv(o.output, default_header(o.config.d), x);
  out << "simulated n=" << o.config.n << " d=" << o.config.d
      << " theta=" << fmt(o.config.theta) << " alpha=" << fmt(o.config.alpha)
      << " seed=" << o.config.seed << " -> " << o.output << '\n';
}

void cmd_train(const TrainOptions& o, std::ostream& out) {
  const CsvTable data = read_csv(o.data);
  const Matrix& x = data.values;
  const auto n = static_cast<std::size_t>(x.rows());
  const int d = static_cast<int>(x.cols());
  if (d < 2) throw ConfigError("training data needs at least 2 columns");
  const std::size_t k1 = o.k1 > 0 ? o.k1 : sqrt_rule(n, parse_rounding(o.rounding));
  const BasisMatrix basis(d);
  const Matrix coords = training_coordinates(x, k1, basis);
  const auto pool = static_cast<std::size_t>(coords.rows());
  out << "n=" << n << " d=" << d << " k1=" << k1 << " radial threshold="
      << fmt(static_cast<double>(n) / static_cast<double>(k1))
      << " extreme angles K=" << pool << '\n';

  NetworkOptions chosen = o.net;
  TrainResult result;
  TrainConfig config;
  if (o.search > 0) {
    if (o.validation.empty()) {
      throw ConfigError("--search needs a --validation data file");
    }
    const CsvTable validation = read_csv(o.validation);
    require_dims(data, validation, "validation");
    const AngularSample reference =
        extreme_angles_above(pareto_standardize(validation.values),
                             static_cast<double>(n) / static_cast<double>(k1))
            .sample;
    std::seed_seq seq{static_cast<std::uint32_t>(o.seed),
                      static_cast<std::uint32_t>(o.seed >> 32), 0x3u};
    std::mt19937_64 rng(seq);
    std::vector<Candidate> candidates;
    std::size_t best = 0;
    for (int i = 0; i < o.search; ++i) {
      Candidate c;
      c.net = draw_candidate(o.net, pool, d, rng);
      c.config = make_config(c.net, k1, pool, d, o.seed);
      try {
        TrainResult r = train_on_coordinates(
            coords, c.config,
            default_generator_spec(d, c.config.latent_dim, c.net.width, c.net.depth),
            default_discriminator_spec(d, c.net.width, c.net.depth));
        const AngularSample phi =
            sample_angles(r.params.generator, basis, o.angle_samples, o.seed);
        c.score = dependence(phi, reference, o.subset_cap, o.seed).value;
        if (!std::isfinite(c.score)) c.diverged = true;
        if (candidates.empty() || c.score < candidates[best].score) {
          best = candidates.size();
          result = std::move(r);
        }
      } catch (const NumericalError&) {
        c.diverged = true;
      }
      out << "candidate " << i + 1 << '/' << o.search << " score "
          << (c.diverged ? std::string("diverged") : fmt(c.score)) << '\n';
      candidates.push_back(std::move(c));
    }
    if (!std::isfinite(candidates[best].score)) {
      throw NumericalError("every search candidate diverged");
    }
    if (!o.search_table.empty()) {
      CsvWriter w(o.search_table,
                  {"candidate", "batch_size", "latent_dim", "width", "depth",
                   "learning_rate", "beta1", "beta2", "lambda", "rho",
                   "n_critic", "score", "selected"});
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Candidate& c = candidates[i];
        w.row({std::to_string(i + 1), std::to_string(c.config.batch_size),
               std::to_string(c.config.latent_dim), std::to_string(c.net.width),
               std::to_string(c.net.depth), fmt(c.net.learning_rate),
               fmt(c.net.beta1), fmt(c.net.beta2), fmt(c.net.lambda),
               fmt(c.net.rho), std::to_string(c.net.n_critic),
               c.diverged ? "inf" : fmt(c.score), i == best ? "1" : "0"});
      }
      w.close();
    }
    chosen = candidates[best].net;
    config = candidates[best].config;
    out << "best candidate " << best + 1 << " score "
        << fmt(candidates[best].score) << '\n';
  } else {
    config = make_config(o.net, k1, pool, d, o.seed);
    result = train_on_coordinates(
        coords, config,
        default_generator_spec(d, config.latent_dim, chosen.width, chosen.depth),
        default_discriminator_spec(d, chosen.width, chosen.depth));
  }

  save_checkpoint(o.checkpoint, Checkpoint{d, n, config, result.params});
  const std::string log_path = o.log.empty() ? o.checkpoint + ".log.csv" : o.log;
  write_log(log_path, result.log);
  out << "trained " << config.n_epochs << " epochs, batch " << config.batch_size
      << ", latent " << config.latent_dim << ", width " << chosen.width
      << ", depth " << chosen.depth << " -> " << o.checkpoint << '\n';
  if (!result.log.empty()) {
    out << "final loss_D=" << fmt(result.log.back().loss_discriminator)
        << " loss_G=" << fmt(result.log.back().loss_generator) << '\n';
  }
}

void cmd_sample(const SampleOptions& o, std::ostream& out) {
  const Checkpoint ckp = load_checkpoint(o.checkpoint);
  const CsvTable data = read_csv(o.data);
  if (data.values.cols() != ckp.d) {
    throw ShapeError("checkpoint has d = " + std::to_string(ckp.d) + " but " +
                     o.data + " has " + std::to_string(data.values.cols()) +
                     " columns");
  }
  const auto n = static_cast<std::size_t>(data.values.rows());
  const std::size_t k2 = o.k2 > 0 ? o.k2 : sqrt_rule(n, parse_rounding(o.rounding));
  if (k2 > ckp.config.k1) {
    throw ConfigError("k2 = " + std::to_string(k2) + " exceeds k1 = " +
                      std::to_string(ckp.config.k1) +
                      " used in training; tail sampling requires k2 <= k1");
  }
  const GpdFitSet fits = fit_margins(data.values, k2);
  const BasisMatrix basis(ckp.d);
  const TailSample tail =
      sample_tail(ckp.params.generator, basis, fits, ckp.config.k1, o.count, o.seed);
  write_csv(o.output, data.header, tail.rows);

  const std::string margins = o.margins.empty() ? o.output + ".margins.csv" : o.margins;
  CsvWriter w(margins, {"margin", "u", "sigma", "xi", "k2", "n"});
  for (std::size_t j = 0; j < fits.dim(); ++j) {
    const MarginFit& m = fits.margins[j];
    w.row({std::to_string(j + 1), fmt(m.threshold), fmt(m.sigma), fmt(m.xi),
           std::to_string(k2), std::to_string(n)});
  }
  w.close();

  out << "sampled " << o.count << " rows from " << tail.proposals
      << " proposals (" << tail.rejections << " rejected), k2=" << k2 << " -> "
      << o.output << '\n';
  for (std::size_t j = 0; j < fits.dim(); ++j) {
    out << "  " << data.header[j] << ": u=" << fmt(fits.margins[j].threshold)
        << " sigma=" << fmt(fits.margins[j].sigma)
        << " xi=" << fmt(fits.margins[j].xi)
        << " order-statistic branch=" << tail.order_branch[j]
        << " gpd branch=" << tail.gpd_branch[j] << '\n';
  }
}

void cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
  const CsvTable generated = read_csv(o.generated);
  const CsvTable test = read_csv(o.test);
  require_dims(generated, test, "evaluate");
  const Eigen::Index d = test.values.cols();
  const auto n_test = static_cast<std::size_t>(test.values.rows());
  const Rounding rounding = parse_rounding(o.rounding);

  std::optional<Checkpoint> ckp;
  if (!o.checkpoint.empty()) {
    ckp = load_checkpoint(o.checkpoint);
    if (ckp->d != d) {
      throw ShapeError("checkpoint has d = " + std::to_string(ckp->d) +
                       " but the data have " + std::to_string(d) + " columns");
    }
  }
  std::optional<CsvTable> train;
  if (!o.train.empty()) {
    train = read_csv(o.train);
    require_dims(*train, test, "evaluate");
  }

  // Radial threshold n/k1 of the training set, applied to the test set.
  double radial = o.radial_threshold;
  if (!(radial > 0.0)) {
    std::size_t n_ref = n_test;
    std::size_t k1 = o.k1;
    if (ckp) {
      n_ref = ckp->n_train;
      if (k1 == 0) k1 = ckp->config.k1;
    } else if (train) {
      n_ref = static_cast<std::size_t>(train->values.rows());
    }
    if (k1 == 0) k1 = sqrt_rule(n_ref, rounding);
    radial = static_cast<double>(n_ref) / static_cast<double>(k1);
  }
  const AngularSample phi_test =
      extreme_angles_above(pareto_standardize(test.values), radial).sample;
  const AngularSample phi_gen =
      ckp ? sample_angles(ckp->params.generator, BasisMatrix(d), o.angle_samples, o.seed)
          : extreme_angles_above(pareto_standardize(generated.values), radial).sample;
  const Score score = dependence(phi_gen, phi_test, o.subset_cap, o.seed);

  // Marginal thresholds u for the tail comparison.
  Vector u;
  if (!o.thresholds.empty()) {
    const CsvTable side = read_csv(o.thresholds);
    const auto it = std::find(side.header.begin(), side.header.end(), "u");
    if (it == side.header.end() || side.values.rows() != d) {
      throw ShapeError(o.thresholds + " must have a 'u' column with one row per margin");
    }
    u = side.values.col(std::distance(side.header.begin(), it));
  } else {
    const Matrix& ref = train ? train->values : test.values;
    const auto n_ref = static_cast<std::size_t>(ref.rows());
    u = order_thresholds(ref, o.k2 > 0 ? o.k2 : sqrt_rule(n_ref, rounding));
  }
  const Matrix gen_tail = exceedances(generated.values, u);
  const Matrix test_tail = exceedances(test.values, u);
  if (gen_tail.rows() == 0 || test_tail.rows() == 0) {
    throw ConfigError("no " + std::string(gen_tail.rows() == 0 ? "generated" : "test") +
                      " rows exceed the marginal thresholds; cannot compute W2");
  }
  const double w2 = w2_distance(gen_tail, test_tail);

  const std::string seed = std::to_string(o.seed);
  const std::string ng = std::to_string(phi_gen.size());
  const std::string nt = std::to_string(phi_test.size());
  CsvWriter w(o.output, {"metric", "k", "value", "n_G", "n_T", "seed"});
  for (const DependenceScore& p : score.parts) {
    w.row({"dependence_score", std::to_string(p.order), fmt(p.value), ng, nt, seed});
  }
  w.row({"dependence_score", "mean", fmt(score.value), ng, nt, seed});
  w.row({"w2_extremes", "tail", fmt(w2), std::to_string(gen_tail.rows()),
         std::to_string(test_tail.rows()), seed});
  w.close();

  if (!o.coefficients.empty()) {
    CsvWriter c(o.coefficients, {"order", "subset", "generated", "test"});
    for (const DependenceScore& p : score.parts) {
      for (const SubsetCoefficient& s : p.coefficients) {
        std::string name;
        for (int j : s.subset) name += (name.empty() ? "" : "-") + std::to_string(j + 1);
        c.row({std::to_string(p.order), name, fmt(s.generated), fmt(s.reference)});
      }
    }
    c.close();
  }

  for (const DependenceScore& p : score.parts) {
    out << "E(" << p.order << ") = " << fmt(p.value)
        << (p.sampled ? " (sampled subsets)" : "") << '\n';
  }
  out << "dependence score = " << fmt(score.value) << " (" << ng
      << " generated angles, " << nt << " test angles, radial threshold "
      << fmt(radial) << ")\n";
  out << "W2 extremes = " << fmt(w2) << " (" << gen_tail.rows() << " generated, "
      << test_tail.rows() << " test rows above u)\n";
}

void cmd_qqdata(const QqOptions& o, std::ostream& out) {
  const CsvTable data = read_csv(o.data);
  const auto n = static_cast<std::size_t>(data.values.rows());
  const std::size_t k2 = o.k2 > 0 ? o.k2 : sqrt_rule(n, parse_rounding(o.rounding));
  const GpdFitSet fits = fit_margins(data.values, k2);
  CsvWriter w(o.output, {"margin", "i", "p", "empirical", "fitted"});
  for (std::size_t j = 0; j < fits.dim(); ++j) {
    const MarginFit& m = fits.margins[j];
    for (std::size_t i = 1; i <= k2; ++i) {
      const double p = (static_cast<double>(i) - 0.5) / static_cast<double>(k2);
      w.row({std::to_string(j + 1), std::to_string(i), fmt(p),
             fmt(m.sorted[n - k2 - 1 + i] - m.threshold),
             fmt(gpd_quantile(p, m.sigma, m.xi))});
    }
  }
  w.close();
  out << "wrote " << k2 << " quantile pairs for each of " << fits.dim()
      << " margins -> " << o.output << '\n';
}

void add_network_options(CLI::App* cmd, NetworkOptions& n) {
  cmd->add_option("--width", n.width, "Neurons per hidden layer")->capture_default_str();
  cmd->add_option("--depth", n.depth, "Number of hidden layers")->capture_default_str();
  cmd->add_option("--latent-dim", n.latent_dim, "Latent dimension (0: d - 1)")
      ->capture_default_str();
  cmd->add_option("--batch-size", n.batch_size,
                  "Batch size (0: floor(K / batch-divisor))")
      ->capture_default_str();
  cmd->add_option("--batch-divisor", n.batch_divisor,
                  "Default batch size is floor(K / batch-divisor)")
      ->capture_default_str();
  cmd->add_option("--learning-rate", n.learning_rate, "Adam step size")->capture_default_str();
  cmd->add_option("--beta1", n.beta1, "Adam first-moment decay")->capture_default_str();
  cmd->add_option("--beta2", n.beta2, "Adam second-moment decay")->capture_default_str();
  cmd->add_option("--lambda", n.lambda, "Gradient penalty coefficient")->capture_default_str();
  cmd->add_option("--rho", n.rho, "Marginal penalty coefficient")->capture_default_str();
  cmd->add_option("--n-critic", n.n_critic, "Critic updates per generator update")
      ->capture_default_str();
  cmd->add_option("--epochs", n.epochs, "Training epochs")->capture_default_str();
}

CLI::Option* add_rounding(CLI::App* cmd, std::string& target) {
  return cmd
      ->add_option("--k-rounding", target, "Rounding of the default k = [sqrt(n)]")
      ->check(CLI::IsMember({"nearest", "floor", "ceil"}))
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Tail sampling with a Wasserstein GAN on the Aitchison simplex"};
  app.name("wagan");
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file with one [command] section; keys are long flag names");
  app.allow_config_extras(CLI::config_extras_mode::error);
  int threads = 0;
  int config_version = 0;
  app.add_option("--threads", threads, "Upper bound on worker threads (0: library default)");
  app.add_option("--config-version", config_version, "Configuration schema version")
      ->group("");

  SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Draw logistic data with Pareto margins");
  simulate->add_option("--d", sim.config.d, "Dimension")->capture_default_str();
  simulate->add_option("--theta", sim.config.theta, "Dependence parameter, >= 1")
      ->capture_default_str();
  simulate->add_option("--alpha", sim.config.alpha, "Pareto tail index, > 0")
      ->capture_default_str();
  simulate->add_option("--n", sim.config.n, "Number of rows")->capture_default_str();
  simulate->add_option("--seed", sim.config.seed, "Random seed")->capture_default_str();
  simulate->add_option("-o,--output", sim.output, "Output CSV")->required();

  TrainOptions tr;
  CLI::App* train = app.add_subcommand("train", "Fit the generator to the extreme angles");
  train->add_option("--data", tr.data, "Training CSV")->required();
  train->add_option("--checkpoint", tr.checkpoint, "Output checkpoint")->required();
  train->add_option("--log", tr.log, "Per-epoch loss CSV (default: <checkpoint>.log.csv)");
  train->add_option("--k1", tr.k1, "Radial threshold n/k1 (0: [sqrt(n)])")->capture_default_str();
  add_rounding(train, tr.rounding);
  train->add_option("--seed", tr.seed, "Random seed")->capture_default_str();
  add_network_options(train, tr.net);
  train->add_option("--search", tr.search, "Random-search budget (0: no search)")
      ->capture_default_str();
  train->add_option("--validation", tr.validation, "Validation CSV for the search");
  train->add_option("--search-table", tr.search_table, "Per-candidate score CSV");
  train->add_option("--angle-samples", tr.angle_samples,
                    "Generated angles used to score candidates")
      ->capture_default_str();
  train->add_option("--subset-cap", tr.subset_cap, "Maximum number of subsets per order")
      ->capture_default_str();

  SampleOptions sa;
  CLI::App* sample = app.add_subcommand("sample", "Generate tail observations");
  sample->add_option("--checkpoint", sa.checkpoint, "Trained checkpoint")->required();
  sample->add_option("--data", sa.data, "Training CSV (order statistics and GPD fits)")
      ->required();
  sample->add_option("-o,--output", sa.output, "Output CSV")->required();
  sample->add_option("--margins", sa.margins,
                     "Per-margin u, sigma, xi CSV (default: <output>.margins.csv)");
  sample->add_option("--k2", sa.k2, "Marginal threshold rank (0: [sqrt(n)])")
      ->capture_default_str();
  add_rounding(sample, sa.rounding);
  sample->add_option("--count", sa.count, "Number of tail rows")->capture_default_str();
  sample->add_option("--seed", sa.seed, "Random seed")->capture_default_str();

  EvaluateOptions ev;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Dependence score and W2 of extremes");
  evaluate->add_option("--generated", ev.generated, "Generated CSV")->required();
  evaluate->add_option("--test", ev.test, "Test CSV")->required();
  evaluate->add_option("--checkpoint", ev.checkpoint,
                       "Draw generated angles from this checkpoint");
  evaluate->add_option("--thresholds", ev.thresholds, "Margins CSV written by sample");
  evaluate->add_option("--train", ev.train, "Training CSV (reference n and thresholds)");
  evaluate->add_option("--k1", ev.k1, "Radial threshold rank (0: checkpoint or [sqrt(n)])")
      ->capture_default_str();
  evaluate->add_option("--k2", ev.k2, "Marginal threshold rank (0: [sqrt(n)])")
      ->capture_default_str();
  add_rounding(evaluate, ev.rounding);
  evaluate->add_option("--radial-threshold", ev.radial_threshold,
                       "Explicit radial threshold for the test angles");
  evaluate->add_option("--angle-samples", ev.angle_samples,
                       "Generated angles drawn from the checkpoint")
      ->capture_default_str();
  evaluate->add_option("--subset-cap", ev.subset_cap, "Maximum number of subsets per order")
      ->capture_default_str();
  evaluate->add_option("--seed", ev.seed, "Random seed")->capture_default_str();
  evaluate->add_option("-o,--output", ev.output, "Metrics report CSV")->required();
  evaluate->add_option("--coefficients", ev.coefficients,
                       "Per-subset coefficient CSV (generated vs test)");

  QqOptions qq;
  CLI::App* qqdata = app.add_subcommand("qqdata", "GPD quantile pairs for QQ plots");
  qqdata->add_option("--data", qq.data, "Data CSV")->required();
  qqdata->add_option("--k2", qq.k2, "Number of excesses (0: [sqrt(n)])")->capture_default_str();
  add_rounding(qqdata, qq.rounding);
  qqdata->add_option("-o,--output", qq.output, "Output CSV")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  try {
    if (app.get_config_ptr()->count() > 0 && config_version != kConfigVersion) {
      throw ConfigError("configuration files must declare config-version = " +
                        std::to_string(kConfigVersion));
    }
    if (threads > 0) Eigen::setNbThreads(threads);
    if (*simulate) cmd_simulate(sim, out);
    if (*train) cmd_train(tr, out);
    if (*sample) cmd_sample(sa, out);
    if (*evaluate) cmd_evaluate(ev, out);
    if (*qqdata) cmd_qqdata(qq, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace wagan::cli
