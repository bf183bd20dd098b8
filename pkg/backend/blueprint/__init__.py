from .fat_graph import (BlueprintError, BoundaryCycle, Edge, FatGraphBlueprint, Polarity, Side,
                        Vertex, trace_boundary_cycles)
from .parser import format_blueprint, parse_blueprint
from .conditions import (EulerData, ProngClass, VertexProng, derive_polarity, euler_characteristic,
                         prong_census, validate_conditions)
from .validation import ValidationReport, Violation
from .catalogue import circle_blueprint, figure_eight_blueprint, theta_blueprint

__all__ = ['BlueprintError', 'BoundaryCycle', 'Edge', 'FatGraphBlueprint', 'Polarity', 'Side',
           'Vertex', 'trace_boundary_cycles', 'format_blueprint', 'parse_blueprint', 'EulerData',
           'ProngClass', 'VertexProng', 'derive_polarity', 'euler_characteristic', 'prong_census',
           'validate_conditions', 'ValidationReport', 'Violation', 'circle_blueprint',
           'figure_eight_blueprint', 'theta_blueprint']
