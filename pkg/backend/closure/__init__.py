from .classification import (FlowClass, FlowKind, classify_flow, flow_class_from_census,
                             is_circle_blueprint, singular_orbit_lines)
from .gluing import (KLEIN_REASON, GluingError, GluingMap, GluingPair, GluingSpec, SurgeryError,
                     SurgeryRecord, apply_gluing, apply_inverse_gluing, format_gluing, gluing_map,
                     kappa_max, parse_gluing, reduce_to_lattice, require_valid, surgery_record,
                     torus_bundle_gluing, validate_gluing)

__all__ = [
    'FlowClass', 'FlowKind', 'classify_flow', 'flow_class_from_census', 'is_circle_blueprint',
    'singular_orbit_lines',
    'KLEIN_REASON', 'GluingError', 'GluingMap', 'GluingPair', 'GluingSpec', 'SurgeryError', 'SurgeryRecord',
    'apply_gluing', 'apply_inverse_gluing', 'format_gluing', 'gluing_map', 'kappa_max', 'parse_gluing',
    'reduce_to_lattice', 'require_valid', 'surgery_record', 'torus_bundle_gluing', 'validate_gluing',
]
