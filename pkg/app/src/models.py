from typing import Annotated, Literal, TypeAlias

from pydantic import BaseModel, Field, computed_field

# ------------------------------- Primary Types ------------------------------ #

Label: TypeAlias = Literal["R", "U", "B", "Bbar"]

Degree: TypeAlias = Annotated[int, Field(description="internal (quantum) degree")]
CohomologicalDegree: TypeAlias = Annotated[int, Field(description="position in a complex")]


class GradedDimSeries(BaseModel):
    dims: dict[int, int]
    cutoff: int

    def at(self, d: int) -> int:
        return self.dims.get(d, 0)

    def text(self) -> str:
        return ", ".join(f"{k}@{d}" for d, k in sorted(self.dims.items())) or "0"


# ------------------------------- Bimodules ------------------------------ #


class Witness(BaseModel):
    generator: str | None
    row: int
    column: int
    left: str
    right: str


class MorphismReport(BaseModel):
    name: str = ""
    passed: bool
    reason: str = ""
    witness: Witness | None = None


class BimoduleDocument(BaseModel):
    name: str
    left: str
    right: str
    shift: int
    labels: list[str]
    degrees: list[int]
    actions: list[list[list[str]]]


class MorphismDocument(BaseModel):
    name: str
    source: BimoduleDocument
    target: BimoduleDocument
    degree: int
    matrix: list[list[str]]


# ------------------------------- Calculus ------------------------------ #


class RelationReport(BaseModel):
    name: str
    lhs: str
    rhs: str
    passed: bool
    witness: Witness | None = None

    @property
    def status(self) -> str:
        return "pass" if self.passed else "FAIL"


# ------------------------------- Complexes ------------------------------ #


class SummandDocument(BaseModel):
    label: str
    shift: int


class DifferentialEntry(BaseModel):
    source: int
    target: int
    matrix: list[list[str]]


class ComplexDocument(BaseModel):
    terms: dict[CohomologicalDegree, list[SummandDocument]]
    differentials: dict[CohomologicalDegree, list[DifferentialEntry]]


class EliminationStep(BaseModel):
    degree: CohomologicalDegree
    source: SummandDocument
    target: SummandDocument
    scalar: str


class ReductionTrace(BaseModel):
    steps: list[EliminationStep] = []
    checked_every_step: bool = True


class ShapeEntry(BaseModel):
    degree: CohomologicalDegree
    label: str
    shift: Degree


class ShapeReport(BaseModel):
    passed: bool
    expected: list[ShapeEntry]
    found: list[ShapeEntry]
    reason: str = ""


# ------------------------------- Grothendieck ring ------------------------------ #


class HomCheckReport(BaseModel):
    source: str
    target: str
    cutoff: int
    expected: dict[int, int]
    computed: dict[int, int]
    passed: bool


# ------------------------------- Three strands ------------------------------ #


class ObstructionReport(BaseModel):
    max_degree: int
    lowest_degree: int = -3
    inclusion_dim: int
    injective_upto: int | None
    cokernel_match: bool
    cokernel_dims: dict[int, int]
    expected_cokernel_dims: dict[int, int]
    section_dim: Annotated[int, Field(description="0 without a section, else 1 + dimension of the space of sections")]
    quotient_found: bool = True
    insufficient_degree: bool = False

    @computed_field  # type: ignore[misc]
    @property
    def top_degree(self) -> int:
        """Highest degree of B_121hat that is checked, same parity as lowest_degree."""
        return self.max_degree - (self.max_degree - self.lowest_degree) % 2

    @computed_field  # type: ignore[misc]
    @property
    def passed(self) -> bool:
        return (
            not self.insufficient_degree
            and self.inclusion_dim == 1
            and self.injective_upto == self.top_degree
            and self.cokernel_match
            and self.quotient_found
            and self.section_dim == 0
        )


# ------------------------------- Command reports ------------------------------ #


class VerifyReport(BaseModel):
    passed: bool
    catalog: list[MorphismReport]
    relations: list[RelationReport]
    negative_controls: list[RelationReport]


class ReduceReport(BaseModel):
    power: int
    inverse: bool
    text: str
    complex: ComplexDocument
    shape: ShapeReport
    trace: ReductionTrace


class HomReport(BaseModel):
    source: str
    target: str
    series: GradedDimSeries
    check: HomCheckReport | None = None


class K0Report(BaseModel):
    expr: str
    value: str
    series: dict[int, int] | None = None
