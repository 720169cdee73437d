from dataclasses import replace
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from core.laurent import TWO_PI, MultiIndex
from core.measure import (
    Arc,
    MeasureSystem,
    PointMass,
    Weight,
    make_angelesco_system,
    make_at_system,
    make_system,
)

COMMANDS = ("moments", "solve", "hp", "para", "zeros", "verify", "scan", "counterexample")
VERIFY_MODES = ("all", "phi_zeros", "para", "hp_neighbours", "christoffel", "chebyshev")
SCAN_MODES = ("phi", "hp_diag", "hp_offdiag")


class MassSpec(BaseModel):
    theta: float = Field(..., description="Angle of the point mass")
    mass: float = Field(..., description="Mass, positive for tagged systems")


MODIFIER_KINDS = ("christoffel_point", "christoffel_sin2", "christoffel_sinprod")


class WeightSpec(BaseModel):
    kind: Literal[
        "uniform",
        "jacobi",
        "exponential",
        "bernstein_szego",
        "christoffel_point",
        "christoffel_sin2",
        "christoffel_sinprod",
    ] = "uniform"
    gamma: float = Field(0.0, ge=0, description="Jacobi exponent at the left endpoint")
    delta: float = Field(0.0, ge=0, description="Jacobi exponent at the right endpoint")
    lam: float = Field(0.0, description="Rate of the exponential weight e^(lam theta)")
    a: Tuple[float, float] = Field((0.0, 0.0), description="Bernstein-Szego parameter as [re, im]")
    z0: Tuple[float, float] = Field((0.0, 0.0), description="Christoffel point as [re, im]")
    varphi: float = Field(0.0, description="Angle of the sin^2 modifier")
    varphi1: float = Field(0.0, description="First angle of the sin product modifier")
    varphi2: float = Field(0.0, description="Second angle of the sin product modifier")
    scale: float = Field(1.0, gt=0, description="Positive constant factor")
    base: Optional["WeightSpec"] = Field(None, description="Weight multiplied by a modifier kind")

    @model_validator(mode="after")
    def check_base(self):
        if self.base is not None and self.kind not in MODIFIER_KINDS:
            raise ValueError(f"'base' only applies to modifier kinds {MODIFIER_KINDS}, not '{self.kind}'")
        return self

    def to_weight(self) -> Weight:
        base = self.base.to_weight() if self.base is not None else None
        if self.kind == "jacobi":
            return Weight.jacobi(self.gamma, self.delta, scale=self.scale)
        if self.kind == "exponential":
            return Weight.exponential(self.lam, scale=self.scale)
        if self.kind == "bernstein_szego":
            return Weight.bernstein_szego(complex(*self.a), scale=self.scale)
        if self.kind == "christoffel_point":
            return replace(Weight.christoffel_point(complex(*self.z0), base), scale=self.scale)
        if self.kind == "christoffel_sin2":
            return replace(Weight.christoffel_sin2(self.varphi, base), scale=self.scale)
        if self.kind == "christoffel_sinprod":
            return replace(Weight.christoffel_sinprod(self.varphi1, self.varphi2, base), scale=self.scale)
        return Weight.uniform(scale=self.scale)


WeightSpec.model_rebuild()


class ComponentSpec(BaseModel):
    arc: Tuple[float, float] = Field(..., description="Arc endpoints [alpha, beta] in radians")
    weight: WeightSpec = Field(default_factory=WeightSpec)
    masses: List[MassSpec] = Field(default_factory=list)


class SystemDescription(BaseModel):
    """JSON description of a measure system.

    Angelesco and untagged systems list ``components``; AT systems give one ``arc``,
    the ``weights`` and the ``base_masses`` of the common measure.
    """

    name: str = ""
    r: Optional[int] = Field(None, ge=1, description="Number of measures; checked against the description when given")
    tag: Literal["angelesco", "at", "none"] = "none"
    t0: float = 0.0
    components: List[ComponentSpec] = Field(default_factory=list)
    arc: Optional[Tuple[float, float]] = None
    weights: List[WeightSpec] = Field(default_factory=list)
    base_masses: List[MassSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_shape(self):
        if self.tag == "at":
            if self.arc is None and not self.components:
                raise ValueError("An AT system needs 'arc' (or components sharing one arc)")
            if not self.weights and not self.components:
                raise ValueError("An AT system needs at least one weight")
        elif not self.components:
            raise ValueError(f"A '{self.tag}' system needs at least one component")
        count = len(self.weights) if self.tag == "at" and self.weights else len(self.components)
        if self.r is not None and self.r != count:
            raise ValueError(f"'r' is {self.r} but the description lists {count} measures")
        return self

    def to_system(self) -> MeasureSystem:
        if self.tag == "at":
            arc = Arc(*(self.arc or self.components[0].arc))
            specs = self.weights or [c.weight for c in self.components]
            masses = [PointMass(m.theta, m.mass) for m in self.base_masses]
            return make_at_system(arc, [w.to_weight() for w in specs], masses, name=self.name)
        arcs = [Arc(*c.arc) for c in self.components]
        weights = [c.weight.to_weight() for c in self.components]
        masses = [[PointMass(m.theta, m.mass) for m in c.masses] for c in self.components]
        if self.tag == "angelesco":
            return make_angelesco_system(arcs, weights, masses, t0=self.t0, name=self.name)
        return make_system(arcs, weights, masses, t0=self.t0, name=self.name)


def parse_taus(text: str) -> List[complex]:
    """``"k"`` gives k equispaced values; otherwise a comma list of angles or complex literals."""
    text = text.strip()
    if text.isdigit():
        count = int(text)
        if count < 1:
            raise ValueError("The tau count must be at least 1")
        return [complex(np.exp(1j * TWO_PI * k / count)) for k in range(count)]
    taus = []
    for token in (t.strip() for t in text.split(",") if t.strip()):
        if "i" in token or "j" in token:
            value = complex(token.replace("i", "j"))
        else:
            value = complex(np.exp(1j * float(token)))
        if abs(abs(value) - 1.0) > 1e-12:
            raise ValueError(f"tau '{token}' is not unimodular")
        taus.append(value / abs(value))
    if not taus:
        raise ValueError("No tau values given")
    return taus


class RunConfig(BaseModel):
    command: Literal["moments", "solve", "hp", "para", "zeros", "verify", "scan", "counterexample"]
    preset: Optional[str] = Field(None, description="Preset system name, e.g. SYS-A2")
    system_path: Optional[str] = Field(None, description="Path of a JSON system description")
    n: Optional[str] = Field(None, description="Multi-index 'a,b,...'")
    m: Optional[str] = Field(None, description="Second multi-index for Hermite-Pade commands")
    max_index: int = Field(2, ge=0, description="Sweep bound for scan/verify/counterexample")
    taus: str = Field("8", description="Tau count or explicit list")
    tol_circle: float = Field(1e-8, gt=0, description="Unit-circle tolerance for zero classification")
    grid: int = Field(4096, ge=2, description="Phase grid size")
    seed: int = Field(0, ge=0, description="Seed for sampled checks")
    output_dir: str = Field("reports", description="Directory for reports")
    mode: Optional[str] = Field(None, description="Verification or scan mode")
    max_frequency: int = Field(6, ge=0, description="Largest |t| dumped by the moments command")

    @field_validator("n", "m")
    @classmethod
    def validate_index(cls, v):
        if v is not None:
            MultiIndex.parse(v)
        return v

    @field_validator("taus")
    @classmethod
    def validate_taus(cls, v):
        parse_taus(v)
        return v

    @model_validator(mode="after")
    def check_command(self):
        if self.command != "counterexample" and (self.preset is None) == (self.system_path is None):
            raise ValueError("Exactly one of --preset and --system is required")
        if self.command in ("solve", "para", "zeros") and self.n is None:
            raise ValueError(f"'{self.command}' needs --n")
        if self.command == "hp" and (self.n is None or self.m is None):
            raise ValueError("'hp' needs --n and --m")
        if self.command == "verify":
            mode = self.mode or "all"
            if mode not in VERIFY_MODES:
                raise ValueError(f"Unknown verify mode '{mode}', expected one of {VERIFY_MODES}")
            self.mode = mode
        if self.command == "scan":
            mode = self.mode or "phi"
            if mode not in SCAN_MODES:
                raise ValueError(f"Unknown scan mode '{mode}', expected one of {SCAN_MODES}")
            self.mode = mode
        return self

    def index(self, name: str = "n") -> Optional[MultiIndex]:
        value = getattr(self, name)
        return MultiIndex.parse(value) if value is not None else None

    def tau_values(self) -> List[complex]:
        return parse_taus(self.taus)
