"""Named identities used throughout the checks."""

from .words import Identity, parse_identity

# Z4 against (x1x2)^2 x1x3x1x4x1x3x1 (x2x1)^2: holds in every diagonal class of UT3.
Z4 = "x1 x2 x1 x3 x1 x2 x1 x4 x1 x2 x1 x3 x1 x2 x1 = x1 x2 x1 x2 x1 x3 x1 x4 x1 x3 x1 x2 x1 x2 x1"
# Z4 against x1x2x1x3x1^2x2x4x2x1^2x3x1x2x1: holds in UT2.
Z4_NEW = "x1 x2 x1 x3 x1 x2 x1 x4 x1 x2 x1 x3 x1 x2 x1 = x1 x2 x1 x3 x1 x1 x2 x4 x2 x1 x1 x3 x1 x2 x1"
# Mal'cev identities for nilpotent groups of class 2 and 3, with x, y, z, t, s
# renamed to x1, x2, x3, x4, x5.
CLASS2 = "x1 x3 x2 x4 x2 x3 x1 = x2 x3 x1 x4 x1 x3 x2"
CLASS3 = ("x1 x3 x2 x4 x2 x3 x1 x5 x2 x3 x1 x4 x1 x3 x2"
          " = x2 x3 x1 x4 x1 x3 x2 x5 x1 x3 x2 x4 x2 x3 x1")

BUILTINS = {
    "z4": Z4,
    "z4new": Z4_NEW,
    "class2": CLASS2,
    "class3": CLASS3,
}

# letter indices standing for the Mal'cev letters x, y, z, t, s
MALCEV_LETTERS = {"x": 1, "y": 2, "z": 3, "t": 4, "s": 5}


def resolve(text_or_name: str) -> Identity:
    """Builtin name (z4, z4new, class2, class3) or identity text."""
    key = text_or_name.strip().lower()
    if key in BUILTINS:
        return parse_identity(BUILTINS[key])
    if "=" not in text_or_name:
        raise KeyError(f"unknown builtin identity {text_or_name!r}; expected one of {', '.join(BUILTINS)}")
    return parse_identity(text_or_name)
