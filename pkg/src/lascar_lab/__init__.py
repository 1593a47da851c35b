"""Exact desk-scale computations with closed sets, stabilizers and expanded structures."""
