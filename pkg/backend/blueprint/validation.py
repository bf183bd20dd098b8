from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    subject: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {'code': self.code, 'message': self.message, 'subject': self.subject}


@dataclass
class ValidationReport:
    #itemized outcome of a check, violations are entries not exceptions
    violations: List[Violation] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str, subject: Optional[str] = None) -> None:
        self.violations.append(Violation(code, message, subject))

    def codes(self) -> List[str]:
        return [v.code for v in self.violations]

    def has(self, code: str) -> bool:
        return code in self.codes()

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'violations': [v.to_dict() for v in self.violations],
            'details': dict(self.details),
        }
