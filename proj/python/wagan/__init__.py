# Copyright 2026 The wagan Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""WGAN on Aitchison coordinates of extreme angles with multivariate GP tail sampling."""

from wagan._core import (
    IoError,
    MarginFit,
    Model,
    NumericalError,
    clr,
    dependence_score,
    extremal_coefficient,
    extreme_angles,
    fit_margins,
    from_coordinates,
    gpd_fit,
    orthonormal_basis,
    pareto_standardize,
    run_cli,
    simulate_logistic,
    softmax,
    to_coordinates,
    train,
    true_extremal_coefficient,
    w2_distance,
)

__all__ = [
    "IoError",
    "MarginFit",
    "Model",
    "NumericalError",
    "clr",
    "dependence_score",
    "extremal_coefficient",
    "extreme_angles",
    "fit_margins",
    "from_coordinates",
    "gpd_fit",
    "orthonormal_basis",
    "pareto_standardize",
    "run_cli",
    "simulate_logistic",
    "softmax",
    "to_coordinates",
    "train",
    "true_extremal_coefficient",
    "w2_distance",
]
