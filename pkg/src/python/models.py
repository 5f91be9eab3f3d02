"""
Pydantic models for run configuration and reports
"""

from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from errors import FieldSpecError
from fields import parse_field_spec
from reps import SUPPORTED_PRIMES

Command = Literal["compute", "orders", "check-symmetry", "check-parity", "palindrome", "enumerate", "selftest"]


class RunConfig(BaseModel):
    """Validated command-line configuration"""
    command: Command
    field: str = "Q"
    knot: Optional[str] = None
    presentation: Optional[str] = None
    rep: Optional[str] = None
    prime: Optional[int] = None
    out: Optional[str] = None
    json_output: bool = False
    jobs: int = Field(default=1, ge=1)
    metrics_out: Optional[str] = None
    thurston_norm: Optional[int] = None
    all_columns: bool = False
    closed: bool = False

    @model_validator(mode="after")
    def check_inputs(self) -> "RunConfig":
        try:
            parse_field_spec(self.field)
        except FieldSpecError as e:
            raise ValueError(str(e)) from e
        if self.command != "selftest":
            sources = [s for s in (self.knot, self.presentation) if s is not None]
            if len(sources) != 1:
                raise ValueError("exactly one of --knot and --presentation is required")
        if self.command == "enumerate":
            if self.prime not in SUPPORTED_PRIMES:
                raise ValueError(f"--prime must be one of {SUPPORTED_PRIMES}")
        return self


class IndeterminacyModel(BaseModel):
    """Units a representative is defined up to"""
    dimension: int
    sign_allowed: bool
    det_generators: List[str]


class SymmetryReportModel(BaseModel):
    holds: bool
    inconclusive: bool
    unit_coefficient: Optional[str] = None
    unit_exponent: Optional[List[int]] = None
    charge: Optional[List[int]] = None
    charge_valid: Optional[bool] = None
    reason: str = ""


class ParityReport(BaseModel):
    degree: int
    dimension: int
    thurston_norm: int
    parity_holds: bool
    bound_holds: bool


class PalindromeReport(BaseModel):
    found: bool
    shift: Optional[int] = None
    coefficients: Optional[List[str]] = None


class OrdersReport(BaseModel):
    order0: str
    order1: str
    ratio: Optional[str] = None
    closed: bool = False
    matches_invariant: Optional[bool] = None


class InvariantReport(BaseModel):
    """One report per input, extended by whichever check ran"""
    success: bool = True
    command: str
    input_hash: str
    presentation: str
    representation: str
    field: str
    representative: str
    canonical: str
    is_zero: bool
    degree: Optional[int] = None
    is_polynomial: bool = False
    column: Optional[int] = None
    columns_checked: List[int] = []
    indeterminacy: IndeterminacyModel
    symmetry: Optional[SymmetryReportModel] = None
    parity: Optional[ParityReport] = None
    palindrome: Optional[PalindromeReport] = None
    orders: Optional[OrdersReport] = None


class EnumeratedRepModel(BaseModel):
    name: str
    images: List[str]
    irreducible: bool


class EnumerationReport(BaseModel):
    success: bool = True
    presentation: str
    prime: int
    count: int
    irreducible_count: int
    representations: List[EnumeratedRepModel]


class CriterionResult(BaseModel):
    number: int
    name: str
    status: Literal["pass", "fail", "skip"]
    detail: str = ""
    skipped_cases: int = 0


class SelftestReport(BaseModel):
    success: bool
    passed: int
    failed: int
    skipped: int
    criteria: List[CriterionResult]


class ErrorReport(BaseModel):
    """Error report model"""
    success: bool = False
    error: str
    code: int
    item: Optional[str] = None
