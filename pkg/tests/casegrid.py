"""Parameter grid shared by the solver, certifier and acceptance tests."""

from radii import FamilySpec, InvalidProblem, Normalization, RadiusKind, RadiusProblem

SPECS = [
    FamilySpec.bessel(0.5),
    FamilySpec.bessel(1.5),
    FamilySpec.jackson(0.5, 0.3),
    FamilySpec.jackson(1.5, 0.7),
    FamilySpec.hahn_exton(0.5, 0.7),
    FamilySpec.hahn_exton(1.5, 0.3),
    FamilySpec.lommel(-0.75),
    FamilySpec.lommel(0.25),
    FamilySpec.lommel(0.75),
    FamilySpec.legendre(2),
    FamilySpec.legendre(3),
]

KINDS = [
    RadiusKind.lem_star(),
    RadiusKind.lem_convex(),
    RadiusKind.jan_star(1, -1),
    RadiusKind.jan_convex(1, -1),
    RadiusKind.jan_star(0.5, 0),
    RadiusKind.jan_convex(0.5, 0),
]

SERIES_NORMS = [Normalization.F, Normalization.G, Normalization.H]


def norms_for(spec):
    return [Normalization.INTRINSIC] if spec.family.value == "legendre" else SERIES_NORMS


def problems():
    """Every supported (family, norm, kind) at the grid parameters, skipping excluded ranges."""
    out = []
    for spec in SPECS:
        for norm in norms_for(spec):
            for kind in KINDS:
                try:
                    out.append(RadiusProblem(spec, norm, kind))
                except InvalidProblem:
                    continue
    return out


def problem_id(p):
    return str(p).replace(" ", "-")
