from .run_report import ReportLevel, RunReport, input_digest, write_csv

__all__ = ['ReportLevel', 'RunReport', 'input_digest', 'write_csv']
