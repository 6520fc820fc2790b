"""
Verification reports shared by the identity harnesses.
"""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_serializer

EPSILON = 1e-300


class VerificationReport(BaseModel):
    """
    Outcome of comparing the two sides of an identity.

    Attributes:
        name: Name of the identity.
        lhs: Left hand side.
        rhs: Right hand side.
        abs_error: ``|lhs - rhs|``.
        rel_error: ``|lhs - rhs| / max(|lhs|, |rhs|, 1e-300)``.
        residual: Relative L2 error of a reconstructed signal, when applicable.
        tolerance: Tolerance the report was judged against.
        passed: Verdict, None until judged.
        grids: Summary of the sampling used.
        details: Further numbers worth keeping.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    lhs: complex
    rhs: complex
    abs_error: float = Field(ge=0)
    rel_error: float = Field(ge=0)
    residual: float | None = None
    tolerance: float | None = None
    passed: bool | None = None
    grids: str = ""
    details: dict[str, Any] = Field(default_factory=dict)

    @field_serializer("lhs", "rhs")
    def _serialize_complex(self, value: complex) -> list[float]:
        return [value.real, value.imag]

    @classmethod
    def compare(cls, name: str, lhs: complex, rhs: complex, grids: str = "", **details) -> VerificationReport:
        lhs, rhs = complex(lhs), complex(rhs)
        gap = abs(lhs - rhs)
        return cls(name=name, lhs=lhs, rhs=rhs, abs_error=gap,
                   rel_error=gap / max(abs(lhs), abs(rhs), EPSILON), grids=grids, details=details)

    @property
    def error(self) -> float:
        """Error judged against the tolerance: the residual when present, else the relative error."""
        return self.residual if self.residual is not None else self.rel_error

    def judge(self, tolerance: float) -> VerificationReport:
        return self.model_copy(update={"tolerance": tolerance, "passed": bool(self.error <= tolerance)})

    def detail_line(self) -> str:
        verdict = {None: "unjudged", True: "pass", False: "FAIL"}[self.passed]
        return f"{self.name}: error {self.error:.3e} (tolerance {self.tolerance}) {verdict}"
