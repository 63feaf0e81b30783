"""Adversarial and cross-module exercises beyond the per-module tests."""

import random

import pytest

from coarsec import (
    CadProvider,
    Decomposition,
    EntourageSequence,
    Family,
    GroundSet,
    ProductGroundSet,
    Relation,
    brute_force_witness,
    cad_to_sfcdc,
    check_decomposition,
    check_sfcdc_certificate,
    check_witness,
    components_witness,
    generate,
    product_relation,
    product_structure,
    product_witness,
    refine_chain,
)

from gen import random_metric


def rel(n, pairs):
    return Relation(GroundSet(n), frozenset(pairs))


def fam(n, *members):
    return Family(GroundSet(n), tuple(frozenset(m) for m in members))


class TestRefineChainAdversarial:
    def test_member_reused_across_parts(self):
        # the same next-family member appears in two parts; the second
        # occurrence contributes nothing after trimming
        g = GroundSet(3)
        whole = g.all_points()
        v1 = fam(3, whole)
        v2 = fam(3, {0, 1}, {2})
        d = Decomposition(
            whole, ((frozenset({0, 1}), frozenset({2})), (frozenset({0, 1}),))
        )
        families, rows = refine_chain((v1, v2), ((d,),))
        assert families[1] == v2
        (adapted,) = rows[0]
        assert adapted.target == whole
        used = [m for part in adapted.parts for m in part]
        assert sorted(sorted(m) for m in used) == [[0, 1], [2]]

    def test_empty_part_in_provider_data(self):
        g = GroundSet(2)
        whole = g.all_points()
        v1 = fam(2, whole)
        v2 = fam(2, {0}, {1})
        d = Decomposition(whole, ((), (frozenset({0}), frozenset({1}))))
        e = rel(2, set())
        assert check_decomposition(whole, e, 2, d, v2).ok
        families, rows = refine_chain((v1, v2), ((d,),))
        assert families[1] == v2
        for member, adapted in zip(families[0].members, rows[0]):
            assert check_decomposition(member, e, 2, adapted, families[1]).ok

    def test_unused_low_index_member_does_not_steal(self):
        # {0, 1} sits first in the family but is not used by the stored
        # decomposition; coherent refinement must ignore it
        g = GroundSet(2)
        whole = g.all_points()
        v1 = fam(2, whole)
        v2 = fam(2, {0, 1}, {0}, {1})
        d = Decomposition(whole, ((frozenset({0}),), (frozenset({1}),)))
        families, rows = refine_chain((v1, v2), ((d,),))
        assert sorted(sorted(m) for m in families[1].members) == [[0], [1]]
        (adapted,) = rows[0]
        assert check_decomposition(whole, g.full(), 2, adapted, families[1]).ok


class TestCadDimsClamping:
    def test_dims_shorter_than_levels(self):
        # three levels of data against a one-entry piece-count sequence
        g = GroundSet(4)
        s = generate(g, [rel(4, {(0, 1), (2, 3)})])
        e1 = g.diagonal()
        e2 = rel(4, {(0, 1), (1, 0)}).union(e1)
        e3 = s.emax
        seq = EntourageSequence(g, (e1, e2, e3))
        whole = g.all_points()
        v1 = fam(4, whole)
        v2 = fam(4, {0, 1}, {2, 3})
        v3 = fam(4, {0, 1}, {2}, {3})

        def build(structure, k_seq):
            d1 = Decomposition(whole, ((frozenset({0, 1}), frozenset({2, 3})),))
            row2 = (
                Decomposition(frozenset({0, 1}), ((frozenset({0, 1}),),)),
                Decomposition(frozenset({2, 3}), ((frozenset({2}),), (frozenset({3}),))),
            )
            return (v1, v2, v3), ((d1,), row2)

        provider = CadProvider(dims=(2,), build=build)
        cert = cad_to_sfcdc(s, seq, provider)
        assert check_sfcdc_certificate(s, seq, cert).ok
        # dims extend by the last entry: c_1 = 2, c_2 = 4, plus the root
        assert len(cert.families) == 5
        assert cert.families[2] == v2
        assert cert.families[4] == v3


class TestDecompositionMonotonicity:
    def test_shrinking_the_entourage_preserves_validity(self):
        rng = random.Random(71)
        for _ in range(40):
            n = rng.randint(2, 5)
            g = GroundSet(n)
            members = {
                frozenset(rng.randrange(n) for _ in range(rng.randint(1, 3)))
                for _ in range(rng.randint(1, 5))
            }
            family = Family(g, tuple(m for m in members if m))
            target = frozenset().union(*family.members)
            big_pairs = frozenset(
                (rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 6))
            )
            small_pairs = frozenset(p for p in big_pairs if rng.random() < 0.5)
            big, small = rel(n, big_pairs), rel(n, small_pairs)
            from coarsec import find_decomposition

            d = find_decomposition(target, big, 2, family)
            if d is None:
                continue
            assert check_decomposition(target, small, 2, d, family).ok
            assert check_decomposition(target, big, 3, d, family).ok


class TestGeneratedStructureProducts:
    def test_product_witness_on_generated_structures(self):
        rng = random.Random(72)
        for _ in range(15):
            nx, ny = rng.randint(2, 5), rng.randint(2, 5)
            sx = generate(
                GroundSet(nx),
                [rel(nx, {(rng.randrange(nx), rng.randrange(nx)) for _ in range(2)})],
            )
            sy = generate(
                GroundSet(ny),
                [rel(ny, {(rng.randrange(ny), rng.randrange(ny)) for _ in range(2)})],
            )

            def growing(structure, count):
                n = structure.ground.size
                items = []
                current = structure.ground.diagonal()
                for _ in range(count):
                    extra = rel(
                        n, {(rng.randrange(n), rng.randrange(n)) for _ in range(2)}
                    ).intersect(structure.emax)
                    current = current.union(extra)
                    items.append(current)
                return items

            count = rng.randint(2, 7)
            seq = EntourageSequence(
                ProductGroundSet(sx.ground, sy.ground),
                tuple(
                    product_relation(k, l)
                    for k, l in zip(growing(sx, count), growing(sy, count))
                ),
            )
            witness = product_witness(sx, sy, seq, components_witness, components_witness)
            assert check_witness(product_structure(sx, sy), seq, witness).ok
            assert len(witness.families) >= len(seq)

    def test_longer_sequences_use_more_columns(self):
        from coarsec import product_witness_trace

        g = GroundSet(2)
        s = generate(g, [g.full()])
        pg = ProductGroundSet(g, g)
        items = tuple(pg.diagonal() for _ in range(6)) + (pg.full(),)
        seq = EntourageSequence(pg, items)
        trace = product_witness_trace(s, s, seq, components_witness, components_witness)
        # columns 1..4 start within the sequence (indices 1, 3, 6 <= 7 < 10)
        assert trace.stabilization_column == 4
        assert check_witness(product_structure(s, s), seq, trace.witness).ok


class TestProductSfcdcCertificates:
    def test_cad_on_a_product_structure(self):
        rng = random.Random(73)
        mx = random_metric(rng, 3)
        my = random_metric(rng, 2)
        from coarsec import (
            closure_class_cad_provider,
            max_metric_product,
            metric_entourage,
            structure_from_metric,
        )

        sx = structure_from_metric(mx, mx.scales())
        sy = structure_from_metric(my, my.scales())
        product = product_structure(sx, sy)
        prod_metric = max_metric_product(mx, my)
        scales = prod_metric.scales()
        seq = EntourageSequence(
            product.ground,
            tuple(metric_entourage(prod_metric, r) for r in scales[: max(2, len(scales))]),
        )
        cert = cad_to_sfcdc(product, seq, closure_class_cad_provider())
        assert check_sfcdc_certificate(product, seq, cert).ok

    def test_product_sfcdc_through_documents_and_cli(self, tmp_path, capsys):
        import json

        from coarsec import closure_class_cad_provider, metric_entourage
        from coarsec.cli import main
        from coarsec.documents import (
            emit,
            explicit_sequence_doc,
            sfcdc_certificate_doc,
        )
        from coarsec import FiniteMetric, max_metric_product, structure_from_metric

        unit = FiniteMetric.from_rows([[0, 1], [1, 0]])
        s = structure_from_metric(unit, [1])
        product = product_structure(s, s)
        prod_metric = max_metric_product(unit, unit)
        seq = EntourageSequence(
            product.ground,
            (metric_entourage(prod_metric, 0), metric_entourage(prod_metric, 1)),
        )
        cert = cad_to_sfcdc(product, seq, closure_class_cad_provider())
        doc = sfcdc_certificate_doc(explicit_sequence_doc(seq), cert)

        space_path = tmp_path / "x.json"
        space_path.write_text(
            json.dumps(
                {
                    "kind": "metric",
                    "size": 2,
                    "dist": [["0", "1"], ["1", "0"]],
                    "scales": ["1"],
                }
            ),
            encoding="utf-8",
        )
        cert_path = tmp_path / "cert.json"
        cert_path.write_text(emit(doc), encoding="utf-8")
        code = main(
            [
                "check-sfcdc",
                "--space",
                str(space_path),
                "--space2",
                str(space_path),
                "--certificate",
                str(cert_path),
            ]
        )
        out = capsys.readouterr().out
        assert code == 0
        assert json.loads(out)["ok"] is True


class TestBruteForceAgainstConstructedWitnesses:
    def test_search_space_includes_class_partitions(self):
        rng = random.Random(74)
        for _ in range(10):
            n = rng.randint(2, 5)
            s = generate(
                GroundSet(n),
                [rel(n, {(rng.randrange(n), rng.randrange(n)) for _ in range(2)})],
            )
            seq = EntourageSequence(s.ground, (s.ground.diagonal(), s.emax))
            found = brute_force_witness(s, seq, 1)
            canonical = components_witness(s, seq)
            assert found is not None
            assert check_witness(s, seq, found).ok
            assert check_witness(s, seq, canonical).ok
