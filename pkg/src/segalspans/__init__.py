"""Spans of finite sets organized by simplicial and cyclic shapes.

Subpackages build up from finite linear and cyclic orders, through gap
dualities and decomposition-style limit checks on simplicial data, to
algebra structures on spans and the comparison functor that links the
cyclic and pointed-family pictures.
"""
