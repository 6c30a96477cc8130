"""
Pydantic models for everything the command line prints, and the JSON encoding used for them.

Reports carry ``schema_version`` and are written with sorted keys and no timestamps,
so identical inputs give byte-identical output.
"""
import json
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field
from tabulate import tabulate

from config import SCHEMA_VERSION


class CommandReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    command: str
    status: str
    result: Dict[str, Any] = Field(default_factory=dict)


class ErrorReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    command: str
    status: str = "error"
    type: str
    error: str
    details: Dict[str, Any] = Field(default_factory=dict)


class ConditionResult(BaseModel):
    condition: int
    name: str
    status: str
    details: Dict[str, Any] = Field(default_factory=dict)


class CongenialityReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    algebra: Dict[str, Any]
    bound: int
    primes: List[int]
    conditions: List[ConditionResult]
    passed: bool

    def condition(self, number: int) -> ConditionResult:
        return next(c for c in self.conditions if c.condition == number)


# (u_word, u_group, v_word, v_group, coefficient)
WitnessTerm = Tuple[str, str, str, str, str]


class GeneratorCertificate(BaseModel):
    generator: str
    exponent: int = Field(ge=1)
    witness: List[WitnessTerm]
    bound: int


class PertinencyCertificate(BaseModel):
    schema_version: str = SCHEMA_VERSION
    kind: str = "pertinency_certificate"
    group: str
    group_order: int
    group_elements: List[str]
    bound: int
    exponent_cap: int
    generators: List[GeneratorCertificate]
    gk_dimension: int
    small: bool
    conclusion: str
    auslander: Optional[str] = None

    @property
    def exponents(self) -> List[int]:
        return [g.exponent for g in self.generators]


def to_json(model: BaseModel, pretty: bool = True) -> str:
    document = model.model_dump(mode="json", exclude_none=True)
    return json.dumps(document, sort_keys=True, indent=2 if pretty else None, ensure_ascii=False)


def render_table(rows: List[Dict[str, Any]], headers: str = "keys") -> str:
    """Human-readable table for --pretty output."""
    return tabulate(rows, headers=headers, tablefmt="github")
