"""Learning heavy-tailed distributions with generalized-Pareto-noise
generators trained by energy distance under a root-Euclidean metric."""
from ._rng import RNG_ALGORITHM, make_rng
from .energy import energy_distance, energy_distance_and_grad, energy_distance_grad, wasserstein1_1d
from .evaluation import (CcdfCurve, ManifoldSpec, ccdf_export, ks_statistic, loglog_area,
                         manifold_distance, manifold_distances, mean_log_mdist, two_sided_area)
from .generator import (DimTransform, GeneratorSpec, NoiseSpec, build_generator,
                        build_pareto_generator, generate, generate_grad_chain, sample_noise,
                        signed_power)
from .gpd import GpdParams, empirical_conditional_excess, gpd_ccdf, gpd_quantile, sample_gpd
from .metrics import MetricSpec, metric_eval, metric_grad_x
from .net import AdamState, NetParams, NetSpec, adam_step, net_backward, net_forward, net_init
from .synth import (CauchyMixtureSpec, load_csv, sample_cauchy, sample_cauchy_mixture,
                    sample_highd_manifold, sample_joint2d, save_csv)
from .tailest import TailEstimate, estimate_tail_index, hill_estimator
from .trainer import Checkpoint, TrainConfig, TrainReport, split_normalize, train

__version__ = "0.1.0"
