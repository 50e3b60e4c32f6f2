"""Pydantic request/response models for the HTTP service.

Requests carry filesystem paths plus option blocks that mirror the config
file sections; the server resolves paths on its own filesystem, which is
shared with clients in the intended single-host / shared-volume setups.
Optional fields left as None fall back to the package defaults.
"""

from pydantic import BaseModel, Field


class IntrinsicsModel(BaseModel):
    fx: float
    fy: float
    cx: float
    cy: float


class AugmentModel(BaseModel):
    enabled: bool = True
    gain_min: float | None = None
    gain_max: float | None = None
    grayscale_prob: float | None = None
    order: str | None = None


class SimulateOptions(BaseModel):
    seed: int | None = None
    water_classes: list[str] | None = None
    color_space: str | None = None
    depth_kind: str | None = None
    intrinsics: IntrinsicsModel | None = None
    meters_per_unit: float | None = None
    assignment: str | None = None
    augment: AugmentModel | None = None
    pairing_rule: str | None = None
    png_compress_level: int | None = None
    workers: int | None = None


class EvalOptions(BaseModel):
    unit_scale: float | None = None
    max_depth: float | None = None
    delta_thresholds: list[float] | None = None
    silog_lambda: float | None = None
    median_align: bool | None = None
    pooling: str | None = None
    meters_per_unit: float | None = None


class ManifestRequest(BaseModel):
    rgb_root: str
    depth_root: str
    output_path: str
    coefficients: str | None = None
    options: SimulateOptions = Field(default_factory=SimulateOptions)


class SimulateRequest(BaseModel):
    rgb_root: str
    depth_root: str
    output_dir: str
    coefficients: str | None = None
    options: SimulateOptions = Field(default_factory=SimulateOptions)


class GridRequest(BaseModel):
    rgb_path: str
    depth_path: str
    output_path: str
    coefficients: str | None = None
    options: SimulateOptions = Field(default_factory=SimulateOptions)


class EvalRequest(BaseModel):
    pred_root: str
    gt_root: str
    options: EvalOptions = Field(default_factory=EvalOptions)
    model: str | None = None
    dataset: str | None = None
    include_records: bool = False
    records_path: str | None = None


class TableRowModel(BaseModel):
    model: str
    cells: dict[str, tuple[float, float] | None]


class TableRequest(BaseModel):
    rows: list[TableRowModel] | None = None
    summaries: list[dict] | None = None
    fmt: str = "md"


class HealthResponse(BaseModel):
    status: str
    version: str


class WaterClassEntry(BaseModel):
    class_id: str
    beta: tuple[float, float, float]
    veil: tuple[float, float, float]


class WaterClassesResponse(BaseModel):
    source: str
    classes: list[WaterClassEntry]


class ManifestResponse(BaseModel):
    records: int
    manifest_path: str
    config_digest: str


class SimulateResponse(BaseModel):
    total: int
    rendered: int
    failed: list[dict]
    wall_time_s: float
    workers: int
    output_dir: str
    manifest_path: str


class GridResponse(BaseModel):
    output_path: str
    tiles: int
    labels: list[str]
    width: int
    height: int


class EvalResponse(BaseModel):
    summary: dict
    model: str | None = None
    dataset: str | None = None
    images: int
    skipped: int
    records: list[dict] | None = None
    records_path: str | None = None


class TableResponse(BaseModel):
    text: str
    fmt: str


class ErrorBody(BaseModel):
    kind: str
    detail: str
