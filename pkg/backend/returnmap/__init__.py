from .cones import (ConeReport, cone_images, cone_margin, cone_vectors, estimate_lambda0, jacobian_spot_check,
                    two_step_margins, verify_cones)
from .return_system import (NORM_SCALE, ChartHit, ReturnMapError, ReturnMapSystem, ReturnStep,
                            TerminatesAtStableSet, finite_difference_jacobian, orbit, return_jacobian,
                            return_step, sample_domain_points, wrap_difference)
from .stable_curves import (DensityReport, NonGraphCurveError, StableCurve, StableCurveFamily,
                            density_probe, generation_zero, pull_back_family, stable_curves)

__all__ = [
    'ConeReport', 'cone_images', 'cone_margin', 'cone_vectors', 'estimate_lambda0', 'jacobian_spot_check',
    'two_step_margins', 'verify_cones',
    'NORM_SCALE', 'ChartHit', 'ReturnMapError', 'ReturnMapSystem', 'ReturnStep', 'TerminatesAtStableSet',
    'finite_difference_jacobian', 'orbit', 'return_jacobian', 'return_step', 'sample_domain_points',
    'wrap_difference',
    'DensityReport', 'NonGraphCurveError', 'StableCurve', 'StableCurveFamily', 'density_probe',
    'generation_zero', 'pull_back_family', 'stable_curves',
]
