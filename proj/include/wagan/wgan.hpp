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

#ifndef WAGAN_WGAN_HPP_
#define WAGAN_WGAN_HPP_

// Wasserstein GAN with gradient penalty on Aitchison coordinates of extreme
// angles. The generator maps standard normal latents to R^{d-1}; the
// discriminator (critic) maps R^{d-1} to R. The generator objective carries
// an extra penalty pulling the mean of softmax(V G(z)) towards 1/d, the
// marginal constraint of an angular measure.

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "wagan/aitchison.hpp"
#include "wagan/autodiff.hpp"

namespace wagan {

inline constexpr double kHiddenSlope = 0.01;
inline constexpr double kOutputSlope = 1.0;

// Fully connected network: leaky-ReLU(0.01) after every hidden layer,
// identity output.
struct MlpSpec {
  int input_dim = 1;
  int output_dim = 1;
  std::vector<int> hidden;

  void validate() const;
  // widths: input, hidden..., output
  std::vector<int> widths() const;
  std::size_t parameter_count() const;
};

struct Layer {
  Matrix weight;  // fan_in x fan_out
  Matrix bias;  // 1 x fan_out
};

class Mlp {
 public:
  Mlp() = default;
  // All-zero parameters of the declared shape.
  explicit Mlp(MlpSpec spec);
  // Uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
  static Mlp glorot(MlpSpec spec, std::mt19937_64& rng);

  // Rows of `x` are inputs.
  Matrix forward(const Matrix& x) const;

  const MlpSpec& spec() const { return spec_; }
  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t parameter_count() const { return spec_.parameter_count(); }

  // Parameters as a flat list ordered W_1, b_1, W_2, b_2, ...
  std::vector<Matrix*> parameters();
  std::vector<const Matrix*> parameters() const;

  friend bool operator==(const Mlp& a, const Mlp& b);

 private:
  MlpSpec spec_;
  std::vector<Layer> layers_;
};

// Tape leaves for every parameter of a network, in parameters() order.
struct MlpVars {
  std::vector<ad::Var> params;
};

MlpVars bind(const Mlp& net, ad::Tape& tape, bool requires_grad);
ad::Var forward(const MlpVars& vars, ad::Var x);

struct AdamConfig {
  double alpha = 1e-3;
  double beta1 = 0.5;
  double beta2 = 0.9;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<Matrix> m;
  std::vector<Matrix> v;
  std::int64_t t = 0;

  static AdamState zeros_like(const Mlp& net);
  friend bool operator==(const AdamState& a, const AdamState& b);
};

// One bias-corrected Adam update of `params` in place.
void adam_step(std::span<Matrix* const> params, std::span<const Matrix> grads,
               AdamState& state, const AdamConfig& config);

struct NetworkParams {
  Mlp generator;
  Mlp discriminator;
  AdamState adam_generator;
  AdamState adam_discriminator;
};

NetworkParams init_networks(const MlpSpec& generator,
                            const MlpSpec& discriminator, std::uint64_t seed);

struct DiscriminatorLoss {
  ad::Var total;
  ad::Var critic;   // mean D(fake) - mean D(real)
  ad::Var penalty;  // mean (|grad_x D(mixed)|_2 - 1)^2, before lambda
};

// Critic objective on one batch. `mixed` rows are u real + (1 - u) fake. The
// input gradient at `mixed` is recorded with create_graph so that the
// penalty can be differentiated with respect to the critic weights.
DiscriminatorLoss discriminator_loss(ad::Tape& tape, const MlpVars& critic,
                                     const Matrix& real, const Matrix& fake,
                                     const Matrix& mixed, double lambda);

struct GeneratorLoss {
  ad::Var total;
  ad::Var adversarial;  // -mean D(G(z))
  ad::Var marginal;     // |mean softmax(V G(z)) - 1/d|_2, before rho
};

GeneratorLoss generator_loss(ad::Tape& tape, const Matrix& latents,
                             const MlpVars& generator, const MlpVars& critic,
                             const BasisMatrix& basis, double rho);

struct TrainConfig {
  std::size_t k1 = 100;
  double lambda_gp = 5.0;
  double rho_marginal = 1.0;
  int n_critic = 5;
  std::size_t batch_size = 64;
  AdamConfig adam;
  int latent_dim = 1;
  int n_epochs = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochLog {
  int epoch = 0;
  double loss_discriminator = 0.0;
  double loss_generator = 0.0;
  double gradient_penalty = 0.0;
  double marginal_penalty = 0.0;
};

struct TrainResult {
  NetworkParams params;
  std::vector<EpochLog> log;
  Matrix coordinates;  // K x (d-1) training pool
  std::size_t n_train = 0;
};

// Unit-Pareto standardization, L1 polar decomposition, angles with
// R >= n / k1 and their coordinates in the orthonormal basis.
Matrix training_coordinates(const Matrix& data, std::size_t k1,
                            const BasisMatrix& basis);

// Full training run on raw data (rows = observations).
TrainResult train(const Matrix& data, const TrainConfig& config,
                  const MlpSpec& generator, const MlpSpec& discriminator);

// Training loop on a prepared coordinate pool; `train` delegates here.
TrainResult train_on_coordinates(const Matrix& coordinates,
                                 const TrainConfig& config,
                                 const MlpSpec& generator,
                                 const MlpSpec& discriminator);

// Default network shapes for dimension d.
MlpSpec default_generator_spec(int d, int latent_dim, int width, int depth);
MlpSpec default_discriminator_spec(int d, int width, int depth);

struct Checkpoint {
  int d = 0;
  std::size_t n_train = 0;
  TrainConfig config;
  NetworkParams params;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Binary layout, all integers and floats little-endian:
//   "WAGANCKP" magic, u32 version, u32 d, u32 latent_dim, u32 basis_dim,
//   u64 seed, u64 k1, u64 n_train, config echo (f64 lambda, f64 rho,
//   u32 n_critic, u64 batch_size, f64 alpha, f64 beta1, f64 beta2,
//   f64 epsilon, u32 n_epochs), f64 hidden slope, f64 output slope,
//   generator widths (u32 count, u32 each), discriminator widths, then per
//   layer the row-major f64 weight block followed by the bias block
//   (generator first), then the Adam states (u64 t, m blocks, v blocks) of
//   generator and discriminator.
void save_checkpoint(const std::filesystem::path& path,
                     const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace wagan

#endif  // WAGAN_WGAN_HPP_
