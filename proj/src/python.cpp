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

// Python bindings. Validation errors surface as ValueError, I/O errors as
// OSError subclasses and numerical failures as ArithmeticError subclasses.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "wagan/aitchison.hpp"
#include "wagan/angular.hpp"
#include "wagan/cli.hpp"
#include "wagan/datagen.hpp"
#include "wagan/error.hpp"
#include "wagan/margins.hpp"
#include "wagan/metrics.hpp"
#include "wagan/sampler.hpp"
#include "wagan/wgan.hpp"

namespace py = pybind11;
using wagan::Matrix;
using wagan::Vector;

namespace {

wagan::AngularSample angular(const Matrix& points) {
  return wagan::AngularSample::uniform(points);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "WGAN on Aitchison coordinates of extreme angles, with GP tail sampling.";

  py::register_exception<wagan::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<wagan::IoError>(m, "IoError", PyExc_OSError);

  m.def(
      "simulate_logistic",
      [](int d, double theta, double alpha, std::size_t n, std::uint64_t seed) {
        return wagan::sample_logistic({d, theta, alpha, n, seed});
      },
      py::arg("d"), py::arg("theta"), py::arg("alpha") = 2.0, py::arg("n"), py::arg("seed") = 0,
      "Rows X_i = R_i W_i with a logistic(theta) angular measure and Pareto(alpha) margins.");
  m.def("true_extremal_coefficient", &wagan::true_extremal_coefficient, py::arg("theta"),
        py::arg("subset_size"));

  m.def("orthonormal_basis", [](Eigen::Index d) { return wagan::BasisMatrix(d).matrix(); },
        py::arg("d"));
  m.def("clr", [](const Matrix& w) { return wagan::clr_rows(w); }, py::arg("points"));
  m.def("softmax", [](const Matrix& x) { return wagan::softmax_rows(x); }, py::arg("x"));
  m.def(
      "to_coordinates",
      [](const Matrix& w) { return wagan::to_coordinates(w, wagan::BasisMatrix(w.cols())); },
      py::arg("points"));
  m.def(
      "from_coordinates",
      [](const Matrix& c) { return wagan::from_coordinates(c, wagan::BasisMatrix(c.cols() + 1)); },
      py::arg("coordinates"));

  m.def("pareto_standardize", &wagan::pareto_standardize, py::arg("data"));
  m.def(
      "gpd_fit",
      [](const std::vector<double>& excesses) {
        const auto p = wagan::gpd_fit(excesses);
        return py::make_tuple(p.sigma, p.xi);
      },
      py::arg("excesses"), "Maximum-likelihood (sigma, xi) of positive excesses.");

  py::class_<wagan::MarginFit>(m, "MarginFit")
      .def_readonly("threshold", &wagan::MarginFit::threshold)
      .def_readonly("sigma", &wagan::MarginFit::sigma)
      .def_readonly("xi", &wagan::MarginFit::xi)
      .def("__repr__", [](const wagan::MarginFit& f) {
        std::ostringstream s;
        s << "MarginFit(threshold=" << f.threshold << ", sigma=" << f.sigma << ", xi=" << f.xi
          << ")";
        return s.str();
      });
  m.def("fit_margins", [](const Matrix& data, std::size_t k2) {
    return wagan::fit_margins(data, k2).margins;
  }, py::arg("data"), py::arg("k2"));

  m.def(
      "extreme_angles",
      [](const Matrix& data, std::size_t k1) {
        return wagan::extreme_angles(wagan::pareto_standardize(data), k1).sample.points;
      },
      py::arg("data"), py::arg("k1"), "L1 angles of rows whose standardized radius is >= n/k1.");
  m.def(
      "extremal_coefficient",
      [](const Matrix& angles, const std::vector<int>& subset) {
        return wagan::extremal_coefficient(angular(angles), subset);
      },
      py::arg("angles"), py::arg("subset"));
  m.def(
      "dependence_score",
      [](const Matrix& generated, const Matrix& reference, int order, std::size_t cap,
         std::uint64_t seed) {
        return wagan::dependence_score(angular(generated), angular(reference), order, cap, seed)
            .value;
      },
      py::arg("generated"), py::arg("reference"), py::arg("order"),
      py::arg("cap") = wagan::kDefaultSubsetCap, py::arg("seed") = 0);
  m.def("w2_distance", &wagan::w2_distance, py::arg("a"), py::arg("b"));

  py::class_<wagan::Checkpoint>(m, "Model")
      .def_readonly("d", &wagan::Checkpoint::d)
      .def_readonly("n_train", &wagan::Checkpoint::n_train)
      .def_property_readonly("k1", [](const wagan::Checkpoint& c) { return c.config.k1; })
      .def("save", [](const wagan::Checkpoint& c, const std::filesystem::path& p) {
        wagan::save_checkpoint(p, c);
      }, py::arg("path"))
      .def_static("load", &wagan::load_checkpoint, py::arg("path"))
      .def(
          "sample_angles",
          [](const wagan::Checkpoint& c, std::size_t count, std::uint64_t seed) {
            return wagan::sample_angles(c.params.generator, wagan::BasisMatrix(c.d), count, seed).points;
          },
          py::arg("count"), py::arg("seed") = 0)
      .def(
          "sample_tail",
          [](const wagan::Checkpoint& c, const Matrix& data, std::size_t k2, std::size_t count,
             std::uint64_t seed) {
            const auto fits = wagan::fit_margins(data, k2);
            return wagan::sample_tail(c.params.generator, wagan::BasisMatrix(c.d), fits,
                                      c.config.k1, count, seed)
                .rows;
          },
          py::arg("data"), py::arg("k2"), py::arg("count"), py::arg("seed") = 0,
          "Rows beyond the marginal thresholds of `data`.");

  m.def(
      "train",
      [](const Matrix& data, std::size_t k1, int epochs, std::size_t batch_size, int width,
         int depth, int latent_dim, double lr, double lambda_gp, double rho, int n_critic,
         std::uint64_t seed) {
        const int d = static_cast<int>(data.cols());
        wagan::TrainConfig cfg;
        cfg.k1 = k1;
        cfg.n_epochs = epochs;
        cfg.batch_size = batch_size;
        if (batch_size == 0) {
          const auto pool = wagan::training_coordinates(data, k1, wagan::BasisMatrix(d)).rows();
          cfg.batch_size = std::max<std::size_t>(1, static_cast<std::size_t>(pool) / 10);
        }
        cfg.latent_dim = latent_dim > 0 ? latent_dim : d - 1;
        cfg.adam.alpha = lr;
        cfg.lambda_gp = lambda_gp;
        cfg.rho_marginal = rho;
        cfg.n_critic = n_critic;
        cfg.seed = seed;
        auto result = [&] {
          py::gil_scoped_release release;
          return wagan::train(data, cfg, wagan::default_generator_spec(d, cfg.latent_dim, width, depth),
                              wagan::default_discriminator_spec(d, width, depth));
        }();
        py::list log;
        for (const auto& e : result.log) {
          log.append(py::make_tuple(e.epoch, e.loss_discriminator, e.loss_generator,
                                    e.gradient_penalty, e.marginal_penalty));
        }
        return py::make_tuple(wagan::Checkpoint{d, result.n_train, cfg, std::move(result.params)},
                              log);
      },
      py::arg("data"), py::arg("k1"), py::arg("epochs") = 5000, py::arg("batch_size") = 0,
      py::arg("width") = 64, py::arg("depth") = 2, py::arg("latent_dim") = 0,
      py::arg("lr") = 1e-3, py::arg("lambda_gp") = 5.0, py::arg("rho") = 1.0,
      py::arg("n_critic") = 5, py::arg("seed") = 0,
      "batch_size 0 means floor(K / 10) for K extreme angles. Returns (model, log); log rows are (epoch, L_D, L_G, gradient penalty, marginal penalty).");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = wagan::cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit code, stdout, stderr).");
}
