"""Regenerate the text-format corpus under tests/corpus (deterministic)."""

from __future__ import annotations

import argparse
import random
from pathlib import Path

from cobalg.category import dg_category
from cobalg.cobordism import (
    assemble_functor_value,
    build_iterated_cones,
    glue,
    identity_datum,
    snake_category,
    snake_inclusion_functor,
    snake_projection_functor,
)
from cobalg.cones import all_profiles, identity_ts, sum_ts
from cobalg.generators import (
    random_chain_map,
    random_complex,
    random_composable_chain,
    random_cobordism_datum,
    random_dg_category,
    random_gluing_pair,
    random_strict_decomposition,
)
from cobalg.ktheory import GroupPresentation, datum_triangles, k0_from_triangles
from cobalg.modules import cone, yoneda_module, yoneda_morphism
from cobalg.textio import Emitter, canonicalize


def _complexes(r, n, dims=(1, 2, 3)):
    return [random_complex(r, r.choice(dims)) for _ in range(n)]


def build(seed: int = 0) -> dict:
    r = random.Random(seed)
    files = {}

    files["01_complex_example.txt"] = "complex C dim 2\nd 00\nd 10\n"
    files["02_complex_acyclic_pair.txt"] = "# an acyclic two-cell complex\ncomplex P dim 2\nd 00\nd 10\n\ncomplex Q dim 1\nd 0\n"
    files["03_complex_not_square_zero.txt"] = "complex Bad dim 2\nd 10\nd 00\n"
    files["04_snake_l3.txt"] = "complex C dim 1\nd 0\n\nsnake S base C l 3\n"
    files["05_snake_l5.txt"] = "complex C dim 2\nd 00\nd 10\nsnake S5 base C l 5\n"

    e = Emitter()
    x, y = _complexes(r, 2)
    f = random_chain_map(r, x, y)
    e.chainmap(f, "f", e.complex(x, "X"), e.complex(y, "Y"))
    files["06_chainmap.txt"] = e.text()

    e = Emitter("P")
    eta = random_strict_decomposition(r, _complexes(r, 3, (1, 2)))
    e.conedecomp(eta, "eta")
    files["07_conedecomp.txt"] = e.text()

    for n, name in ((1, "08_tsmorphism.txt"), (2, "09_tsmorphism_pair_random.txt")):
        e = Emitter("Z")
        chain = random_composable_chain(r, n)
        for k, Phi in enumerate(chain):
            e.tsmorphism(Phi, f"Phi{k}")
        files[name] = e.text()

    # worked m = 2 composition: (id + 𝒱') ∘ 𝒱 at one test object
    V, Vp, i = random_gluing_pair(random.Random(7), n_tests=1, m=2, r_ends=2, i=2, dims=(1,))
    N = V.tests[0]
    inner = assemble_functor_value(V, N)
    pieces = [build_iterated_cones(V).yonedas[L].complex_at(N) for L in V.ends]
    outer = sum_ts(identity_ts([pieces[0]]), assemble_functor_value(Vp, N))
    e = Emitter("W")
    e.tsmorphism(inner, "inner")
    e.tsmorphism(outer, "outer")
    files["10_ts_compose_m2.txt"] = e.text()

    for k in range(3):
        A = random_dg_category(r, n_objects=1 + k, dims=(1, 2), name=f"A{k}")
        e = Emitter()
        e.category(A)
        files[f"{11 + k}_category_{k}.txt"] = e.text()

    A = random_dg_category(r, n_objects=1, dims=(2,), name="A")
    B = snake_category(A, 3, name="B")
    e = Emitter()
    e.category(A)
    e.category(B)
    e.functor(snake_inclusion_functor(A, B, 3), "e", "A", "B")
    e.functor(snake_projection_functor(A, B, 3, 1), "c1", "B", "A")
    e.functor(snake_projection_functor(A, B, 3, 3), "c3", "B", "A")
    files["14_snake_category_functors.txt"] = e.text()

    cs = {"K": random_complex(r, 1), "L": random_complex(r, 2), "M": random_complex(r, 1)}
    A = dg_category("D", cs)
    e = Emitter()
    e.category(A)
    YL = yoneda_module(A, "L")
    e.module(YL, "YL", "D")
    files["15_module_yoneda.txt"] = e.text()

    fchain = random_chain_map(r, cs["K"], cs["L"])
    YK = yoneda_module(A, "K")
    nu = yoneda_morphism(A, ("K", "L"), [fchain.f.to_array().reshape(-1)], YK, YL)
    e = Emitter()
    e.category(A)
    e.module(YK, "YK", "D")
    e.module(YL, "YL", "D")
    e.morphism(nu, "yf", "YK", "YL")
    files["16_module_morphism.txt"] = e.text()
    C = cone(nu, name="Cone", check=False)[0]
    e = Emitter()
    e.category(A)
    e.module(C, "Cyf", "D")
    files["17_module_cone.txt"] = e.text()

    for m, name in ((1, "18_cobordism_m1.txt"), (2, "19_cobordism_m2.txt"), (3, "20_cobordism_m3.txt")):
        V = random_cobordism_datum(random.Random(100 + m), n_tests=1, m=m, dims=(1,), perturb=m > 1)
        e = Emitter()
        e.category(V.category, "Ch")
        e.cobordism(V, "V", "Ch")
        files[name] = e.text()

    V = random_cobordism_datum(random.Random(5), n_tests=1, m=2, dims=(1,), null=True)
    objs, tris = datum_triangles(V, "")
    tris.append((objs[-1], "0", "0"))
    e = Emitter()
    e.category(V.category, "Ch")
    e.cobordism(V, "Vnull", "Ch")
    e.k0(k0_from_triangles(objs, tris), "K")
    files["21_null_cobordism_k0.txt"] = e.text()

    V, Vp, i = random_gluing_pair(random.Random(11), n_tests=1, m=2, r_ends=2, i=1, dims=(1,))
    e = Emitter()
    e.category(V.category, "Ch")
    e.cobordism(V, "V", "Ch")
    e.cobordism(Vp, "W", "Ch")
    e.cobordism(glue(V, Vp, i), "VW", "Ch")
    files["22_gluing_triple.txt"] = e.text()

    A = V.category
    e = Emitter()
    e.category(A, "Ch")
    e.cobordism(identity_datum(A, V.tests, V.ends[0]), "I", "Ch")
    files["23_identity_datum.txt"] = e.text()

    e = Emitter()
    e.presentation(GroupPresentation(("a", "b", "c"), (0b011, 0b110)), "G")
    files["24_presentation.txt"] = e.text()

    e = Emitter()
    e.k0(k0_from_triangles(("A", "X1", "X2", "X3", "Y2", "Y3"),
                           [("X1", "0", "Y2"), ("X2", "Y2", "Y3"), ("X3", "Y3", "A")]), "K")
    files["25_k0_decomposition.txt"] = e.text()

    e = Emitter()
    for k in (1, 2, 3):
        for n, p in enumerate(all_profiles(k)):
            e.profile(p, f"p{k}_{n}")
    files["26_profiles.txt"] = e.text()

    e = Emitter()
    e.presentation(GroupPresentation(("L1", "L2"), (0b11,)), "Gcob")
    e.k0(k0_from_triangles(("L1", "L2"), []), "K")
    files["27_theta_negative.txt"] = e.text()

    files["28_comments_whitespace.txt"] = (
        "# hand-written, not in canonical form\n"
        "complex   B   dim 3   # three cells\n"
        "d 000\n  d 100   \nd 000\n\n\n"
        "chainmap g source B target B\n"
        "f 100\nf 010\nf 001\n"
    )
    files["29_unsorted_sections.txt"] = (
        "tsmorphism T source (X) target (X)\ntriple phi eta\n"
        "conedecomp eta pieces (X)\n"
        "chainmap phi source X target eta\nf 10\nf 01\n"
        "complex X dim 2\nd 01\nd 00\n"
    )
    files["30_category_table_order.txt"] = (
        "category Q objects (P)\n"
        "mu 2 (P,P,P) (0,0) -> 1\n"
        "hom (P,P) 1\n"
        "mu 1 (P,P) (0) -> 0\n"
    )
    return files


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests" / "corpus"))
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = build(args.seed)
    for name, text in files.items():
        canonicalize(text)  # every corpus file must parse
        (out / name).write_text(text, encoding="utf-8")
    print(f"wrote {len(files)} files to {out}")


if __name__ == "__main__":
    main()
