"""Bigraded exterior calculus, invariant cohomology and moment-map checks.

Layers, bottom up:

* exact   -- Gaussian-rational scalars and exact linear algebra
* symalg  -- polynomial chart backend (forms, fields, Lie derivatives)
* invariant -- structure-constant models and their finite complexes
* hodge   -- metric adjoints, the six-term Laplacian, Green operator,
             minimal potentials, exact cohomology ranks
* moment  -- balanced targets, map and tuple membership, the pairing and
             its invariances, the flow-derivative confirmation
* masolver -- spectral Newton solver for volume normalization on flat tori
* cli     -- the command-line surface with deterministic reports
"""

__version__ = "0.1.0"

from .exact import CRat
from .symalg import (ChartForm, ChartVectorField, Poly, chart_d, chart_del,
                     chart_delbar, contract, identity_suite, lie01, lie10,
                     lie_bracket, lie_std, mixed_second_derivative_check,
                     wedge)
from .invariant import (InvForm, InvVectorField, LieModel, contract_inv,
                        flow_pullback, integrate, lie01_inv, lie10_inv,
                        load_model, parse_model, save_model, wedge_inv)
from .hodge import (ClassObstructionError, HermitianMetricSpec, MetricContext,
                    aeppli_dim, bc_dim, delta_bc, green_apply, neumann_gamma,
                    three_space_decompose)
from .moment import (BalancedTarget, MapSpec, MomentTuple, check_balanced,
                     flow_derivative_check, lie_g_membership, mu_eval,
                     omega_eval, pg_membership, well_definedness_check,
                     x_membership)
from .masolver import (MAResult, ScalarField, TorusGrid, positivity_check,
                       residual, solve_ma)
from .catalog import CATALOG_MAPS, MODELS, get_map, get_model
