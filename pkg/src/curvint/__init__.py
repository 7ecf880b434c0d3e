"""curvint: curvature integral identities on hypersurfaces of space forms.

Compute higher mean curvatures of closed hypersurfaces immersed in constant
curvature ambients, build position and Killing vector fields, evaluate the
Hsiung-Minkowski and Katsurada integral identities by deterministic
quadrature, and verify the underlying exterior-algebra lemmas in exact
rational arithmetic.
"""

from .spaceform import (AmbientModel, AmbientPoint, AntipodalError,
                        GeometryError, ModelKind, PositionField,
                        TangentVector, Warp, covariant_derivative,
                        geodesic_distance, inner, killing_defect,
                        killing_field, position_field, project_tangent,
                        warp_functions)
from .immersion import (Axis, Chart, FirstOrderData, Hypersurface,
                        ImmersionError, ShapeData, frame_at,
                        principal_curvatures, shape_operator_at)
from .curvature import MeanCurvatures, elementary_symmetric, mean_curvatures, power_sums
from .quadrature import GridRule, QuadratureError, build_grid, integrate, kahan_sum
from .identities import (IdentityError, IdentityReport, flux_residual,
                         katsurada_ratio, katsurada_residual,
                         minkowski_residual, spaceform_residual)
from .framealgebra import (ExteriorForm, FrameAlgebraError, SlotMap,
                           alpha_composed, alpha_explicit, compose,
                           lemma21_check, wedge, wedge_identity_check,
                           weingarten_pullback)
from . import surfaces

__version__ = "0.1.0"
