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

#include "wagan/wgan.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "wagan/angular.hpp"
#include "wagan/error.hpp"
#include "wagan/margins.hpp"

namespace wagan {

void MlpSpec::validate() const {
  if (input_dim < 1 || output_dim < 1) {
    throw ConfigError("network input and output widths must be positive");
  }
  for (int w : hidden) {
    if (w < 1) throw ConfigError("hidden layer widths must be positive");
  }
}

std::vector<int> MlpSpec::widths() const {
  std::vector<int> w;
  w.reserve(hidden.size() + 2);
  w.push_back(input_dim);
  w.insert(w.end(), hidden.begin(), hidden.end());
  w.push_back(output_dim);
  return w;
}

std::size_t MlpSpec::parameter_count() const {
  const auto w = widths();
  std::size_t count = 0;
  for (std::size_t l = 0; l + 1 < w.size(); ++l) {
    count += static_cast<std::size_t>(w[l] + 1) *
             static_cast<std::size_t>(w[l + 1]);
  }
  return count;
}

Mlp::Mlp(MlpSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const auto w = spec_.widths();
  for (std::size_t l = 0; l + 1 < w.size(); ++l) {
    layers_.push_back(
        {Matrix::Zero(w[l], w[l + 1]), Matrix::Zero(1, w[l + 1])});
  }
}

Mlp Mlp::glorot(MlpSpec spec, std::mt19937_64& rng) {
  Mlp net(std::move(spec));
  for (Layer& layer : net.layers_) {
    const double limit = std::sqrt(
        6.0 / static_cast<double>(layer.weight.rows() + layer.weight.cols()));
    std::uniform_real_distribution<double> unif(-limit, limit);
    for (Eigen::Index i = 0; i < layer.weight.rows(); ++i) {
      for (Eigen::Index j = 0; j < layer.weight.cols(); ++j) {
        layer.weight(i, j) = unif(rng);
      }
    }
  }
  return net;
}

Matrix Mlp::forward(const Matrix& x) const {
  if (x.cols() != spec_.input_dim) {
    throw ShapeError("network expects " + std::to_string(spec_.input_dim) +
                     " inputs, got " + std::to_string(x.cols()));
  }
  Matrix h = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Matrix z = h * layers_[l].weight;
    z.rowwise() += layers_[l].bias.row(0);
    if (l + 1 < layers_.size()) {
      h = z.unaryExpr([](double v) { return ad::leaky_relu(v, kHiddenSlope); });
    } else {
      h = std::move(z);
    }
  }
  return h;
}

std::vector<Matrix*> Mlp::parameters() {
  std::vector<Matrix*> out;
  for (Layer& layer : layers_) {
    out.push_back(&layer.weight);
    out.push_back(&layer.bias);
  }
  return out;
}

std::vector<const Matrix*> Mlp::parameters() const {
  std::vector<const Matrix*> out;
  for (const Layer& layer : layers_) {
    out.push_back(&layer.weight);
    out.push_back(&layer.bias);
  }
  return out;
}

bool operator==(const Mlp& a, const Mlp& b) {
  if (a.spec_.widths() != b.spec_.widths()) return false;
  for (std::size_t l = 0; l < a.layers_.size(); ++l) {
    if (a.layers_[l].weight != b.layers_[l].weight ||
        a.layers_[l].bias != b.layers_[l].bias) {
      return false;
    }
  }
  return true;
}

MlpVars bind(const Mlp& net, ad::Tape& tape, bool requires_grad) {
  MlpVars vars;
  for (const Matrix* p : net.parameters()) {
    vars.params.push_back(tape.leaf(*p, requires_grad));
  }
  return vars;
}

ad::Var forward(const MlpVars& vars, ad::Var x) {
  const std::size_t n_layers = vars.params.size() / 2;
  ad::Var h = x;
  for (std::size_t l = 0; l < n_layers; ++l) {
    h = ad::add_row_vector(ad::matmul(h, vars.params[2 * l]),
                           vars.params[2 * l + 1]);
    if (l + 1 < n_layers) h = ad::leaky_relu(h, kHiddenSlope);
  }
  return h;
}

AdamState AdamState::zeros_like(const Mlp& net) {
  AdamState s;
  for (const Matrix* p : net.parameters()) {
    s.m.push_back(Matrix::Zero(p->rows(), p->cols()));
    s.v.push_back(Matrix::Zero(p->rows(), p->cols()));
  }
  return s;
}

bool operator==(const AdamState& a, const AdamState& b) {
  return a.t == b.t && a.m == b.m && a.v == b.v;
}

void adam_step(std::span<Matrix* const> params, std::span<const Matrix> grads,
               AdamState& state, const AdamConfig& config) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw ShapeError("adam_step: parameter, gradient and state counts differ");
  }
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& p = *params[i];
    const Matrix& g = grads[i];
    if (g.rows() != p.rows() || g.cols() != p.cols()) {
      throw ShapeError("adam_step: gradient shape does not match parameter");
    }
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g;
    state.v[i] = config.beta2 * state.v[i] +
                 (1.0 - config.beta2) * g.cwiseProduct(g);
    p.array() -= config.alpha * (state.m[i].array() / c1) /
                 ((state.v[i].array() / c2).sqrt() + config.epsilon);
  }
}

NetworkParams init_networks(const MlpSpec& generator,
                            const MlpSpec& discriminator, std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), 0x1u};
  std::mt19937_64 rng(seq);
  NetworkParams p;
  p.generator = Mlp::glorot(generator, rng);
  p.discriminator = Mlp::glorot(discriminator, rng);
  p.adam_generator = AdamState::zeros_like(p.generator);
  p.adam_discriminator = AdamState::zeros_like(p.discriminator);
  return p;
}

DiscriminatorLoss discriminator_loss(ad::Tape& tape, const MlpVars& critic,
                                     const Matrix& real, const Matrix& fake,
                                     const Matrix& mixed, double lambda) {
  if (real.rows() != fake.rows() || real.rows() != mixed.rows() ||
      real.cols() != fake.cols() || real.cols() != mixed.cols()) {
    throw ShapeError("discriminator_loss: batches must share one shape");
  }
  const ad::Var d_real = forward(critic, tape.constant(real));
  const ad::Var d_fake = forward(critic, tape.constant(fake));
  const ad::Var x_hat = tape.leaf(mixed, true);
  const ad::Var d_mixed = forward(critic, x_hat);
  const ad::Var grad_x =
      tape.grad(ad::sum(d_mixed), std::span<const ad::Var>(&x_hat, 1),
                /*create_graph=*/true)[0];
  DiscriminatorLoss loss;
  loss.critic = ad::mean(d_fake) - ad::mean(d_real);
  loss.penalty = ad::mean(ad::square(ad::add_scalar(ad::row_norm(grad_x), -1.0)));
  loss.total = loss.critic + lambda * loss.penalty;
  return loss;
}

GeneratorLoss generator_loss(ad::Tape& tape, const Matrix& latents,
                             const MlpVars& generator, const MlpVars& critic,
                             const BasisMatrix& basis, double rho) {
  const ad::Var out = forward(generator, tape.constant(latents));
  if (out.cols() != basis.coord_dim()) {
    throw ShapeError("generator output width " + std::to_string(out.cols()) +
                     " does not match basis dimension " +
                     std::to_string(basis.coord_dim()));
  }
  const ad::Var scores = forward(critic, out);
  const auto d = basis.ambient_dim();
  const ad::Var angles = ad::softmax_rows(
      ad::matmul(out, tape.constant(basis.matrix().transpose())));
  const ad::Var avg = ad::scale(ad::sum_rows(angles),
                                1.0 / static_cast<double>(latents.rows()));
  const ad::Var centre =
      tape.constant(Matrix::Constant(1, d, 1.0 / static_cast<double>(d)));
  GeneratorLoss loss;
  loss.adversarial = ad::scale(ad::mean(scores), -1.0);
  loss.marginal = ad::row_norm(avg - centre);
  loss.total = loss.adversarial + rho * loss.marginal;
  return loss;
}

void TrainConfig::validate() const {
  if (k1 < 1) throw ConfigError("k1 must be at least 1");
  if (!(lambda_gp >= 0.0)) throw ConfigError("lambda must be nonnegative");
  if (!(rho_marginal >= 0.0)) throw ConfigError("rho must be nonnegative");
  if (n_critic < 1) throw ConfigError("n_critic must be at least 1");
  if (batch_size < 1) throw ConfigError("batch size must be at least 1");
  if (latent_dim < 1) throw ConfigError("latent dimension must be at least 1");
  if (n_epochs < 0) throw ConfigError("number of epochs must be nonnegative");
  if (!(adam.alpha > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) ||
      !(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
    throw ConfigError("Adam betas must lie in [0, 1)");
  }
  if (!(adam.epsilon > 0.0)) throw ConfigError("Adam epsilon must be positive");
}

Matrix training_coordinates(const Matrix& data, std::size_t k1,
                            const BasisMatrix& basis) {
  if (data.cols() != basis.ambient_dim()) {
    throw ShapeError("data has " + std::to_string(data.cols()) +
                     " columns but the basis expects " +
                     std::to_string(basis.ambient_dim()));
  }
  const ExtremeAngles ext = extreme_angles(pareto_standardize(data), k1);
  return to_coordinates(ext.sample.points, basis);
}

TrainResult train(const Matrix& data, const TrainConfig& config,
                  const MlpSpec& generator, const MlpSpec& discriminator) {
  config.validate();
  if (data.cols() < 2) throw DomainError("training needs d >= 2 columns");
  const BasisMatrix basis(static_cast<int>(data.cols()));
  TrainResult result = train_on_coordinates(
      training_coordinates(data, config.k1, basis), config, generator,
      discriminator);
  result.n_train = static_cast<std::size_t>(data.rows());
  return result;
}

TrainResult train_on_coordinates(const Matrix& coordinates,
                                 const TrainConfig& config,
                                 const MlpSpec& generator,
                                 const MlpSpec& discriminator) {
  config.validate();
  const Eigen::Index pool = coordinates.rows();
  const Eigen::Index dim = coordinates.cols();
  if (pool < 1) throw ConfigError("no extreme angles to train on");
  if (generator.input_dim != config.latent_dim ||
      generator.output_dim != dim || discriminator.input_dim != dim ||
      discriminator.output_dim != 1) {
    throw ShapeError("network shapes do not match latent dimension " +
                     std::to_string(config.latent_dim) +
                     " and coordinate dimension " + std::to_string(dim));
  }
  if (config.batch_size > static_cast<std::size_t>(pool)) {
    throw ConfigError("batch size " + std::to_string(config.batch_size) +
                      " exceeds the " + std::to_string(pool) +
                      " extreme angles; lower the batch size or raise k1");
  }
  const BasisMatrix basis(static_cast<int>(dim) + 1);
  const auto m = static_cast<Eigen::Index>(config.batch_size);

  TrainResult result;
  result.coordinates = coordinates;
  result.n_train = static_cast<std::size_t>(pool);
  result.params = init_networks(generator, discriminator, config.seed);
  Mlp& gen = result.params.generator;
  Mlp& critic = result.params.discriminator;

  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32), 0x2u};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<Eigen::Index> pick(0, pool - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  auto latents = [&] {
    Matrix z(m, config.latent_dim);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = normal(rng);
    }
    return z;
  };
  auto values = [](const std::vector<ad::Var>& vars) {
    std::vector<Matrix> out;
    out.reserve(vars.size());
    for (const ad::Var& v : vars) out.push_back(v.value());
    return out;
  };

  Matrix real(m, dim);
  Matrix mixed(m, dim);
  ad::Tape tape;
  result.log.reserve(static_cast<std::size_t>(config.n_epochs));
  for (int epoch = 1; epoch <= config.n_epochs; ++epoch) {
    EpochLog entry;
    entry.epoch = epoch;
    for (int step = 0; step < config.n_critic; ++step) {
      for (Eigen::Index i = 0; i < m; ++i) real.row(i) = coordinates.row(pick(rng));
      const Matrix fake = gen.forward(latents());
      for (Eigen::Index i = 0; i < m; ++i) {
        const double u = unif(rng);
        mixed.row(i) = u * real.row(i) + (1.0 - u) * fake.row(i);
      }
      tape.clear();
      const MlpVars vars = bind(critic, tape, true);
      const DiscriminatorLoss loss =
          discriminator_loss(tape, vars, real, fake, mixed,
                             config.lambda_gp);
      const auto grads = values(tape.grad(loss.total, vars.params));
      adam_step(critic.parameters(), grads, result.params.adam_discriminator,
                config.adam);
      entry.loss_discriminator = loss.total.scalar();
      entry.gradient_penalty = loss.penalty.scalar();
    }
    tape.clear();
    const MlpVars g_vars = bind(gen, tape, true);
    const MlpVars d_vars = bind(critic, tape, false);
    const GeneratorLoss loss = generator_loss(tape, latents(), g_vars, d_vars,
                                              basis, config.rho_marginal);
    const auto grads = values(tape.grad(loss.total, g_vars.params));
    adam_step(gen.parameters(), grads, result.params.adam_generator,
              config.adam);
    entry.loss_generator = loss.total.scalar();
    entry.marginal_penalty = loss.marginal.scalar();
    if (!std::isfinite(entry.loss_discriminator) ||
        !std::isfinite(entry.loss_generator)) {
      throw NumericalError("training diverged at epoch " +
                           std::to_string(epoch) +
                           "; try a smaller learning rate");
    }
    result.log.push_back(entry);
  }
  return result;
}

MlpSpec default_generator_spec(int d, int latent_dim, int width, int depth) {
  MlpSpec s;
  s.input_dim = latent_dim;
  s.output_dim = d - 1;
  s.hidden.assign(static_cast<std::size_t>(depth), width);
  return s;
}

MlpSpec default_discriminator_spec(int d, int width, int depth) {
  MlpSpec s;
  s.input_dim = d - 1;
  s.output_dim = 1;
  s.hidden.assign(static_cast<std::size_t>(depth), width);
  return s;
}

namespace {

constexpr std::array<char, 8> kMagic = {'W', 'A', 'G', 'A', 'N', 'C', 'K', 'P'};

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::array<unsigned char, sizeof(T)> b;
    std::memcpy(b.data(), &v, sizeof(T));
    std::reverse(b.begin(), b.end());
    std::memcpy(&v, b.data(), sizeof(T));
  }
  return v;
}

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  }
  template <typename T>
  void put(T v) {
    v = to_little(v);
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void put_matrix(const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) put<double>(m(i, j));
    }
  }
  void put_widths(const MlpSpec& spec) {
    const auto w = spec.widths();
    put<std::uint32_t>(static_cast<std::uint32_t>(w.size()));
    for (int x : w) put<std::uint32_t>(static_cast<std::uint32_t>(x));
  }
  void finish() {
    out_.flush();
    if (!out_) throw IoError("failed writing " + path_.string());
  }
  std::ofstream& stream() { return out_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path)
      : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open checkpoint " + path.string());
  }
  template <typename T>
  T get() {
    T v;
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in_) throw IoError("checkpoint " + path_.string() + " is truncated");
    return to_little(v);
  }
  void get_matrix(Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = get<double>();
    }
  }
  MlpSpec get_spec() {
    const auto count = get<std::uint32_t>();
    if (count < 2 || count > 1024) corrupt("layer count");
    std::vector<int> w(count);
    for (auto& x : w) {
      const auto v = get<std::uint32_t>();
      if (v < 1 || v > (1u << 20)) corrupt("layer width");
      x = static_cast<int>(v);
    }
    MlpSpec spec;
    spec.input_dim = w.front();
    spec.output_dim = w.back();
    spec.hidden.assign(w.begin() + 1, w.end() - 1);
    return spec;
  }
  [[noreturn]] void corrupt(const std::string& what) const {
    throw IoError("checkpoint " + path_.string() + " is corrupt: bad " + what);
  }
  std::ifstream& stream() { return in_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
};

void put_adam(Writer& w, const AdamState& s) {
  w.put<std::uint64_t>(static_cast<std::uint64_t>(s.t));
  for (const Matrix& m : s.m) w.put_matrix(m);
  for (const Matrix& v : s.v) w.put_matrix(v);
}

AdamState get_adam(Reader& r, const Mlp& net) {
  AdamState s = AdamState::zeros_like(net);
  s.t = static_cast<std::int64_t>(r.get<std::uint64_t>());
  for (Matrix& m : s.m) r.get_matrix(m);
  for (Matrix& v : s.v) r.get_matrix(v);
  return s;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path,
                     const Checkpoint& ckp) {
  const TrainConfig& c = ckp.config;
  Writer w(path);
  w.stream().write(kMagic.data(), kMagic.size());
  w.put<std::uint32_t>(kCheckpointVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(ckp.d));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(c.latent_dim));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(ckp.d - 1));
  w.put<std::uint64_t>(c.seed);
  w.put<std::uint64_t>(c.k1);
  w.put<std::uint64_t>(ckp.n_train);
  w.put<double>(c.lambda_gp);
  w.put<double>(c.rho_marginal);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(c.n_critic));
  w.put<std::uint64_t>(c.batch_size);
  w.put<double>(c.adam.alpha);
  w.put<double>(c.adam.beta1);
  w.put<double>(c.adam.beta2);
  w.put<double>(c.adam.epsilon);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(c.n_epochs));
  w.put<double>(kHiddenSlope);
  w.put<double>(kOutputSlope);
  w.put_widths(ckp.params.generator.spec());
  w.put_widths(ckp.params.discriminator.spec());
  for (const Mlp* net : {&ckp.params.generator, &ckp.params.discriminator}) {
    for (const Matrix* p : net->parameters()) w.put_matrix(*p);
  }
  put_adam(w, ckp.params.adam_generator);
  put_adam(w, ckp.params.adam_discriminator);
  w.finish();
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  Reader r(path);
  std::array<char, 8> magic{};
  r.stream().read(magic.data(), magic.size());
  if (!r.stream() || magic != kMagic) {
    throw IoError(path.string() + " is not a wagan checkpoint");
  }
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw IoError("checkpoint " + path.string() + " has format version " +
                  std::to_string(version) + ", expected " +
                  std::to_string(kCheckpointVersion));
  }
  Checkpoint ckp;
  TrainConfig& c = ckp.config;
  ckp.d = static_cast<int>(r.get<std::uint32_t>());
  c.latent_dim = static_cast<int>(r.get<std::uint32_t>());
  const auto basis_dim = r.get<std::uint32_t>();
  if (ckp.d < 2 || basis_dim != static_cast<std::uint32_t>(ckp.d - 1)) {
    r.corrupt("dimension");
  }
  c.seed = r.get<std::uint64_t>();
  c.k1 = r.get<std::uint64_t>();
  ckp.n_train = r.get<std::uint64_t>();
  c.lambda_gp = r.get<double>();
  c.rho_marginal = r.get<double>();
  c.n_critic = static_cast<int>(r.get<std::uint32_t>());
  c.batch_size = r.get<std::uint64_t>();
  c.adam.alpha = r.get<double>();
  c.adam.beta1 = r.get<double>();
  c.adam.beta2 = r.get<double>();
  c.adam.epsilon = r.get<double>();
  c.n_epochs = static_cast<int>(r.get<std::uint32_t>());
  if (r.get<double>() != kHiddenSlope || r.get<double>() != kOutputSlope) {
    r.corrupt("activation slopes");
  }
  const MlpSpec gen_spec = r.get_spec();
  const MlpSpec dis_spec = r.get_spec();
  if (gen_spec.input_dim != c.latent_dim || gen_spec.output_dim != ckp.d - 1 ||
      dis_spec.input_dim != ckp.d - 1 || dis_spec.output_dim != 1) {
    r.corrupt("network shapes");
  }
  ckp.params.generator = Mlp(gen_spec);
  ckp.params.discriminator = Mlp(dis_spec);
  for (Mlp* net : {&ckp.params.generator, &ckp.params.discriminator}) {
    for (Matrix* p : net->parameters()) r.get_matrix(*p);
  }
  ckp.params.adam_generator = get_adam(r, ckp.params.generator);
  ckp.params.adam_discriminator = get_adam(r, ckp.params.discriminator);
  if (r.stream().peek() != std::char_traits<char>::eof()) {
    r.corrupt("trailing bytes");
  }
  return ckp;
}

}  // namespace wagan
