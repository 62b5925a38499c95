"""Convex integrands: values, conjugates, recession functions, proximal maps and the regularised kinds."""
