"""Ball-touching strata of closed sets and checks of their estimates."""

import json

from ._core import (
    FormatError,
    InvalidInput,
    Scene,
    StratakitError,
    __version__,
    estimates,
    gamma_constant,
    one_sided_kappa,
)


def load_scene(path):
    with open(path, encoding="utf-8") as f:
        return Scene(f.read())


def stratify(scene, m, points=()):
    return json.loads(scene.stratify_json(m, [list(p) for p in points]))


def verify(scene, estimate, samples=0):
    return json.loads(scene.verify_json(estimate, samples))


__all__ = [
    "FormatError",
    "InvalidInput",
    "Scene",
    "StratakitError",
    "__version__",
    "estimates",
    "gamma_constant",
    "load_scene",
    "one_sided_kappa",
    "stratify",
    "verify",
]
