"""Request/response schemas shared by the HTTP service and the CLI."""

from __future__ import annotations

from pydantic import BaseModel, Field


class FramedLinkSpec(BaseModel):
    strands: int
    word: str = ""
    framings: list[int] = Field(default_factory=list)
    orientations: list[int] | None = None
    name: str | None = None


class PolyRequest(BaseModel):
    k: int
    braid: str | None = None
    strands: int | None = None
    catalog: str | None = None
    color: str = "1/2"
    colors: list[str] | None = None   # one per cap, overrides `color`
    twice: bool = False               # colors given as doubled integers
    normalize: bool = False
    convention: str = "unoriented"


class PolyResponse(BaseModel):
    value_re: float
    value_im: float
    writhe: int
    basis_dim: int
    steps: int
    normalized: bool
    k: int


class InvariantRequest(BaseModel):
    k: int
    link: FramedLinkSpec
    circuit: bool = False
    shots: int = 1024
    seed: int = 0
    workers: int | None = None
    convention: str = "unoriented"


class InvariantResponse(BaseModel):
    value_re: float
    value_im: float
    normalized_re: float
    normalized_im: float
    signature: int
    components: int
    colorings: int
    k: int
    mode: str
    shots: int | None = None
    eta: float | None = None
    seed: int | None = None


class VerifyRequest(BaseModel):
    suite: str
    k: int | None = None
    trials: int | None = None


class VerifyResponse(BaseModel):
    name: str
    passed: bool
    max_residual: float
    checks: int
    tolerance: float
    details: list[str] = Field(default_factory=list)


class VolumeScanRequest(BaseModel):
    nmax: int = 25


class VolumeRow(BaseModel):
    n: int
    kashaev: float
    ratio: float | None
    target: float


class VolumeScanResponse(BaseModel):
    rows: list[VolumeRow]
    target: float
    monotone_increasing: bool | None
    monotone_decreasing: bool | None


class BenchRequest(BaseModel):
    n: int = 3
    k: int = 3
    kappas: list[int] = Field(default_factory=lambda: [10, 20, 40, 80])
    seed: int = 0


class BenchRow(BaseModel):
    kappa: int
    steps: int
    seconds: float


class BenchResponse(BaseModel):
    rows: list[BenchRow]
    r_squared: float | None
    step_bound_constant: float
    within_bound: bool


class CatalogResponse(BaseModel):
    links: dict[str, dict]


class ErrorBody(BaseModel):
    error: str
    code: int
