import itertools
from typing import Literal, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator

from core.errors import InputError
from core.sbm.params import Mode

Kind = Literal['tree-threshold-sweep', 'graph-recovery', 'sdp-robustness', 'cobweb', 'separation-check',
               'appendix-a-check', 'relative-spin']

# Keys whose values are comma-separated grids
GRID_KEYS = ('k', 'eps', 'depth', 'sampler', 'adversary', 'algo', 'mode', 'n', 'a', 'b', 'budget')


class ExperimentSpec(BaseModel):
    """
    Declarative description of one experiment.

    Grid fields hold every value to sweep; the runner takes their product in field order. Scalars
    configure the trials themselves.
    """
    kind: Kind
    trials: int = Field(ge=1)
    seed: int
    out: Optional[str] = None

    k: list[float] = Field(default=[3.0], min_length=1)
    eps: list[float] = Field(default=[0.1], min_length=1)
    depth: list[int] = Field(default=[6], min_length=1)
    sampler: list[str] = Field(default=['plain'], min_length=1)
    adversary: list[str] = Field(default=['none'], min_length=1)
    algo: Optional[list[str]] = Field(default=None, min_length=1)
    mode: list[Mode] = Field(default=[Mode.ASSORTATIVE], min_length=1)

    n: list[int] = Field(default=[200], min_length=1)
    a: list[float] = Field(default=[30.0], min_length=1)
    b: list[float] = Field(default=[2.0], min_length=1)
    budget: list[str] = Field(default=['none'], min_length=1)
    lambda_rule: str = 'model'

    model: Literal['regular', 'poisson'] = 'regular'
    asym: float = Field(default=0.0, ge=0)
    sign: int = 1
    iterations: int = Field(default=50, ge=0)
    pairs: int = Field(default=1000, ge=1)
    samples: int = Field(default=10000, ge=2)

    @field_validator('sign')
    @classmethod
    def _sign(cls, value):
        if value not in (1, -1):
            raise ValueError("sign must be 1 or -1")
        return value

    @field_validator('eps')
    @classmethod
    def _noise_range(cls, values):
        if any(not 0 <= v <= 1 for v in values):
            raise ValueError("noise values must lie in [0, 1]")
        return values

    def grid(self, *keys: str, **defaults) -> list[dict]:
        """
        Every combination of the named grid fields, first key varying slowest.

        ``defaults`` supplies the values of fields left unset in the file.
        """
        values = [getattr(self, key) or defaults[key] for key in keys]
        return [dict(zip(keys, combination)) for combination in itertools.product(*values)]


def parse_spec(text: str) -> ExperimentSpec:
    """
    Parse the ``key = value`` experiment format.

    One assignment per line; ``#`` starts a comment; blank lines are ignored; grid keys take
    comma-separated values.

    :param text: File contents.
    :return: The validated spec.
    :rtype: ExperimentSpec
    :raises InputError: On malformed lines, duplicate keys or invalid values.
    """
    raw = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition('=')
        key, value = key.strip().replace('-', '_'), value.strip()
        if not sep or not key:
            raise InputError(f"Line {number}: expected key = value")
        if key in raw:
            raise InputError(f"Line {number}: duplicate key '{key}'")
        raw[key] = [item.strip() for item in value.split(',')] if key in GRID_KEYS else value
    unknown = set(raw) - set(ExperimentSpec.model_fields)
    if unknown:
        raise InputError(f"Unknown experiment keys: {', '.join(sorted(unknown))}")
    try:
        return ExperimentSpec.model_validate(raw)
    except ValidationError as e:
        raise InputError(f"Invalid experiment spec: {e}")


def load_spec(path: str) -> ExperimentSpec:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return parse_spec(f.read())
    except OSError as e:
        raise InputError(f"Cannot read experiment spec {path}: {e}")
