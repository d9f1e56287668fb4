"""Run reports and the JSON encoding of extended reals."""
import json
import math
from dataclasses import asdict, dataclass, field

POS_INF = "+inf"
NEG_INF = "-inf"


def encode_ext(x):
    if isinstance(x, float) and math.isinf(x):
        return POS_INF if x > 0 else NEG_INF
    return x


def decode_ext(x):
    if x == POS_INF:
        return math.inf
    if x == NEG_INF:
        return -math.inf
    return x


def _walk(obj, fn):
    if isinstance(obj, dict):
        return {k: _walk(v, fn) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_walk(v, fn) for v in obj]
    return fn(obj)


def dumps(obj, **kwargs):
    """JSON with infinities written as the strings ``"+inf"`` / ``"-inf"``."""
    return json.dumps(_walk(obj, encode_ext), allow_nan=False, **kwargs)


def loads(text):
    return _walk(json.loads(text), decode_ext)


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: list = field(default_factory=list)
    suite_outcomes: list = field(default_factory=list)
    seed: int = None
    wall_time: float = 0.0

    def add_result(self, label, value):
        self.results.append({"label": label, "value": value})

    def result(self, label):
        for item in self.results:
            if item["label"] == label:
                return item["value"]
        raise KeyError(label)

    @property
    def passed(self):
        return all(o["passed"] for o in self.suite_outcomes)

    def to_json(self, indent=2):
        return dumps(asdict(self), indent=indent)

    @classmethod
    def from_json(cls, text):
        data = loads(text)
        return cls(**data)
