import math
from typing import List, Sequence, Union

import numpy as np

from nullasym.exceptions import InvalidInputError

Number = Union[int, float]


def parse_float_list(text: str) -> List[float]:
    """Parse '10,20,40' into [10.0, 20.0, 40.0]"""
    if text is None:
        return []
    items = [item.strip() for item in str(text).split(',')]
    return [float(item) for item in items if item]


def is_sorted(values: Sequence[Number]) -> bool:
    """Check that values are strictly increasing"""
    return all(b > a for a, b in zip(values, values[1:]))


def is_monotone(values: Sequence[Number]) -> bool:
    """Check that values are strictly increasing or strictly decreasing"""
    return is_sorted(values) or is_sorted([-v for v in values])


def unit_vector(vec: Sequence[float]) -> np.ndarray:
    """Normalize a 3-vector"""
    v = np.asarray(vec, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise InvalidInputError('zero vector has no direction')
    return v / norm


def random_unit_vectors(rng: np.random.Generator, count: int) -> np.ndarray:
    """Uniformly distributed directions on the unit sphere"""
    v = rng.normal(size=(count, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def format_value(value) -> str:
    """Stable text form of a number for CSV output"""
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        if value.imag == 0.0:
            return repr(float(value.real))
        return f"{float(value.real)!r}{float(value.imag):+}j"
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return repr(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def jsonable(value):
    """Convert numpy and complex values into plain JSON types"""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        if value.imag == 0.0:
            return jsonable(value.real)
        return {'re': jsonable(value.real), 'im': jsonable(value.imag)}
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value) or math.isinf(value):
            return str(value)
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    return value
