from .fault_injector import GLUING_FAULTS, PRESENTATION_FAULTS, FaultConfig, FaultInjector

__all__ = ['GLUING_FAULTS', 'PRESENTATION_FAULTS', 'FaultConfig', 'FaultInjector']
