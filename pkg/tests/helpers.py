"""Random data-only terms over one data object ``D``."""
import random

from attrcat.signature import parse_signature

DATA_SIG = parse_signature("data D\n")


def _layer(width: int, pos: int, prim: str, arity: int) -> str:
    parts = ["id[D]"] * pos + [prim] + ["id[D]"] * (width - pos - arity)
    return "(" + " * ".join(parts) + ")"


def random_data_term(rng: random.Random, n_in: int, max_nodes: int = 8) -> tuple[str, int]:
    """A well-typed composite of mu/delta/eps/swap layers; returns the term
    and its output count."""
    width = n_in
    layers = []
    nodes = 0
    target = rng.randint(0, max_nodes)
    while nodes < target:
        choices = ["delta"]
        if width >= 2:
            choices += ["mu", "mu", "swap"]
        if width >= 2 or rng.random() < 0.2:
            choices.append("eps")
        op = rng.choice(choices)
        if op == "swap":
            pos = rng.randrange(width - 1)
            layers.append(_layer(width, pos, "swap[D,D]", 2))
            continue
        if op == "mu":
            pos = rng.randrange(width - 1)
            layers.append(_layer(width, pos, "mu[D]", 2))
            width -= 1
        elif op == "delta":
            pos = rng.randrange(width)
            layers.append(_layer(width, pos, "delta[D]", 1))
            width += 1
        else:
            if width == 0:
                break
            pos = rng.randrange(width)
            layers.append(_layer(width, pos, "eps[D]", 1))
            width -= 1
        nodes += 1
        if width == 0:
            break
    if not layers:
        layers.append(" * ".join(["id[D]"] * n_in))
    return " ; ".join(layers), width
