from .verifier import (
    gtheta2_sides,
    parametric_triangle_sides,
    theta_triangle_sides,
    verify_gtheta,
    verify_parametric_triangle,
    verify_theta_parametric,
)

__all__ = [
    "gtheta2_sides",
    "parametric_triangle_sides",
    "theta_triangle_sides",
    "verify_gtheta",
    "verify_parametric_triangle",
    "verify_theta_parametric",
]
