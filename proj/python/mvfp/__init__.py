"""Mixed-variable floorplanning: conjugate sub-gradient coordinate optimization
with distribution-evolution orientation search, plus Bookshelf/GSRC I/O."""

try:  # extension installed inside the package (wheel builds)
    from . import _mvfp as _core
except ImportError:  # extension on sys.path next to the package (build tree)
    import _mvfp as _core

Floorplan = _core.Floorplan
FfaResult = _core.FfaResult
GssResult = _core.GssResult
GssTrial = _core.GssTrial
OutlineSpec = _core.OutlineSpec
ProblemInstance = _core.ProblemInstance
bounding_area = _core.bounding_area
fixed_outline = _core.fixed_outline
hpwl = _core.hpwl
is_legal = _core.is_legal
legalize = _core.legalize
load_instance = _core.load_instance
load_instance_aux = _core.load_instance_aux
min_area = _core.min_area
outline_from_ratio = _core.outline_from_ratio
render_svg = _core.render_svg
total_overlap = _core.total_overlap
whitespace_ratio = _core.whitespace_ratio
write_pl = _core.write_pl

__all__ = [
    "Floorplan",
    "FfaResult",
    "GssResult",
    "GssTrial",
    "OutlineSpec",
    "ProblemInstance",
    "bounding_area",
    "fixed_outline",
    "hpwl",
    "is_legal",
    "legalize",
    "load_instance",
    "load_instance_aux",
    "min_area",
    "outline_from_ratio",
    "render_svg",
    "total_overlap",
    "whitespace_ratio",
    "write_pl",
]

__version__ = "0.1.0"
