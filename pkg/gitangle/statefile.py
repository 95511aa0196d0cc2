"""
gitangle.statefile - JSON state files, params files and report rendering.

State file::

    {"dims": [2, 2], "amplitudes": [[0.7071067811865475, 0.0], ...],
     "unnormalized": false, "label": "bell"}

Amplitudes are row-major over the multi-index with factor 0 slowest.
Floats are written with the shortest repr that reads back to the same
double, so save/load round-trips bit-exactly.
"""

import json
import logging
import math
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic import ValidationError as SchemaError

from gitangle.config import FILE_NORM_TOL, NORM_TOL, FlowParams, SearchBudget, Settings
from gitangle.exceptions import NumericalFailureError, StateFileError
from gitangle.modules.ent_states import PureState

logger = logging.getLogger("gitangle.statefile")

PathLike = Union[str, Path]


class StateFile(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    dims: List[int] = Field(min_length=1)
    amplitudes: List[Tuple[float, float]]
    unnormalized: bool = False
    label: str = ""

    @field_validator("dims")
    @classmethod
    def _positive_dims(cls, dims: List[int]) -> List[int]:
        if any(d < 1 for d in dims):
            raise ValueError(f"dims must be positive integers, got {dims}")
        return dims

    @model_validator(mode="after")
    def _consistent(self) -> "StateFile":
        expected = math.prod(self.dims)
        if len(self.amplitudes) != expected:
            raise ValueError(
                f"{len(self.amplitudes)} amplitudes for dims {self.dims}; expected {expected}"
            )
        norm = math.sqrt(sum(re * re + im * im for re, im in self.amplitudes))
        if not self.unnormalized and abs(norm - 1.0) > FILE_NORM_TOL:
            raise ValueError(
                f"state norm is {norm:.9g}; normalize it or set \"unnormalized\": true"
            )
        return self

    def to_state(self) -> PureState:
        amps = np.array([complex(re, im) for re, im in self.amplitudes])
        if self.unnormalized:
            return PureState(tuple(self.dims), amps, normalized=False, label=self.label)
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            amps = amps / norm
        return PureState(tuple(self.dims), amps, label=self.label)

    @classmethod
    def from_state(cls, state: PureState) -> "StateFile":
        return cls(
            dims=list(state.dims),
            amplitudes=[(float(z.real), float(z.imag)) for z in state.amplitudes],
            unnormalized=not state.normalized,
            label=state.label,
        )


class FlowSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    step: Optional[float] = None
    max_iters: Optional[int] = None
    grad_tol: Optional[float] = None
    null_tol: Optional[float] = None
    backtracking: Optional[float] = None
    armijo: Optional[float] = None
    max_backtracks: Optional[int] = None


class SearchSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    max_evaluations: Optional[int] = None
    refine_iters: Optional[int] = None
    starts: Optional[int] = None
    eps_min: Optional[float] = None
    eps_max: Optional[float] = None
    eps_points: Optional[int] = None
    margin: Optional[float] = None


class ParamsFile(BaseModel):
    """Mirror of the CLI flags; unset fields keep the library defaults."""
    model_config = ConfigDict(extra="forbid")

    flow: FlowSection = Field(default_factory=FlowSection)
    search: SearchSection = Field(default_factory=SearchSection)
    dimension_cap: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = None

    def to_settings(self, seed: Optional[int] = None) -> Settings:
        """Settings with flag overrides applied on top of the file."""
        defaults = Settings()
        chosen_seed = seed if seed is not None else self.seed
        return Settings(
            dimension_cap=self.dimension_cap or defaults.dimension_cap,
            seed=defaults.seed if chosen_seed is None else chosen_seed,
            flow=FlowParams(**self.flow.model_dump(exclude_none=True)),
            search=SearchBudget(**self.search.model_dump(exclude_none=True)),
        )


def _read_json(path: PathLike) -> object:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StateFileError(str(path), f"cannot read file ({exc.strerror})")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(str(path), f"malformed JSON at line {exc.lineno}, column {exc.colno}")


def _schema_message(exc: SchemaError) -> str:
    first = exc.errors()[0]
    where = ".".join(str(p) for p in first.get("loc", ())) or "file"
    return f"{where}: {first.get('msg', 'invalid value')}"


def load_state_file(path: PathLike) -> StateFile:
    try:
        doc = StateFile.model_validate(_read_json(path))
    except SchemaError as exc:
        raise StateFileError(str(path), _schema_message(exc))
    logger.info("STATE_LOADED path=%s dims=%s", path, doc.dims)
    return doc


def load_state(path: PathLike) -> PureState:
    return load_state_file(path).to_state()


def save_state(state: PureState, path: PathLike):
    Path(path).write_text(dumps(StateFile.from_state(state).model_dump()) + "\n", encoding="utf-8")


def load_params(path: Optional[PathLike], seed: Optional[int] = None) -> Settings:
    """Settings from a params file (or defaults when path is None)."""
    if path is None:
        return ParamsFile().to_settings(seed)
    try:
        params = ParamsFile.model_validate(_read_json(path))
    except SchemaError as exc:
        raise StateFileError(str(path), _schema_message(exc))
    return params.to_settings(seed)


def _encode(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def dumps(doc: object) -> str:
    """Deterministic JSON; non-finite numbers are a numerical failure."""
    try:
        return json.dumps(doc, indent=2, allow_nan=False, default=_encode)
    except ValueError:
        raise NumericalFailureError("report serialization (non-finite value)")
