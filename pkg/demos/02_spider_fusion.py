"""
Spiders and data wires
======================

Copying and merging a data value can be wired in many ways that all mean
the same thing.  Fusing each connected cluster into one spider gives
a normal form, so two data diagrams are equal exactly when their spiders
connect the same boundary points.  Here we check that claim against the
brute-force meaning in a three-element model.
"""
from attrcat.diagram import build_diagram, iso_check, normalize_data, spiders
from attrcat.semantics import FiniteModel, denotation
from attrcat.signature import parse_signature

sig = parse_signature("data D\n")
model = FiniteModel({"D": (0, 1, 2)})

pairs = {
    "frobenius": ("(delta[D] * id[D]) ; (id[D] * mu[D])", "mu[D] ; delta[D]"),
    "special": ("delta[D] ; mu[D]", "id[D]"),
    "copy then drop one": ("delta[D] ; (id[D] * eps[D])", "id[D]"),
    "merge is not copy": ("mu[D] ; delta[D]", "id[D] * id[D]"),
}

for label, (a, b) in pairs.items():
    d1, d2 = build_diagram(a, sig), build_diagram(b, sig)
    n1, n2 = normalize_data(d1), normalize_data(d2)
    same_shape = iso_check(n1, n2)
    same_meaning = denotation(d1, model) == denotation(d2, model)
    print(f"{label:20s} spiders {spiders(n1)} vs {spiders(n2)}  "
          f"normal forms equal: {same_shape}  meanings equal: {same_meaning}")

# merge filters for equality: only matching inputs survive
print(denotation(build_diagram("mu[D]", sig), model))
