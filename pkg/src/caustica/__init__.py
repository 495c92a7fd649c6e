"""Complete caustics by refraction of circles and lines.

Exact (rational) and numeric tooling for the classical construction: ray
families refracted at a circle or line, the Cartesian ovals whose normals
they are, and the caustic obtained either as a Sylvester-resultant envelope
or as the evolute of the ovals, with the two routes cross-verified.
"""

from .poly import (
    MPoly,
    variables,
    add,
    mul,
    neg,
    power,
    derivative,
    evaluate,
    exact_div,
    try_exact_div,
    content_and_primitive,
    primitive_part,
    sylvester_matrix,
    sylvester_resultant,
    eliminate_two,
    format_poly,
    parse_poly,
    poly_to_json,
    poly_from_json,
)

__version__ = "0.1.0"
