import numpy as np
import pytest

from p2qbrace import brace, holomorph
from p2qbrace.brace import (
    GammaFunction,
    brace_from_gamma,
    check_gfe,
    circle,
    circle_inverse,
    circle_table,
    conjugate_gamma,
    dual_gamma,
    find_gfe_violation,
    gamma_from_regular,
    identity_gamma,
    inversion_gamma,
    is_morphism,
    lift_rgf,
    nu_subgroup,
    rgf_from_generator,
)
from p2qbrace.groups import GroupElement as E
from p2qbrace.groups import aut_group, make_group


def iota_idx(spec, el):
    return int(aut_group(spec).iota_map[spec.idx(el)])


def aut_power(spec, k, e):
    ag = aut_group(spec)
    acc = ag.identity_idx
    for _ in range(e):
        acc = int(ag.comp[acc, k])
    return acc


class TestGfe:
    def test_identity_gamma(self):
        assert check_gfe(identity_gamma(make_group("P2Q-Type2", 3, 7)))

    def test_inversion_gamma_gives_opposite_group(self):
        spec = make_group("P2Q-Type4", 3, 2)
        gm = inversion_gamma(spec)
        assert check_gfe(gm)
        assert np.array_equal(circle_table(gm), spec.mul_table.T)

    def test_perturbed_table_fails_with_witness(self):
        spec = make_group("P2Q-Type2", 3, 7)
        gm = inversion_gamma(spec)
        bad = list(gm.table)
        bad[5] = (bad[5] + 1) % aut_group(spec).size
        witness = find_gfe_violation(GammaFunction(spec, tuple(bad)))
        assert witness is not None
        g, h = witness
        assert 0 <= g < spec.n and 0 <= h < spec.n


class TestCircle:
    def test_identity_gamma_circle_is_mul(self):
        spec = make_group("P2Q-Type4", 3, 2)
        gm = identity_gamma(spec)
        for x in spec.elements()[:6]:
            for y in spec.elements()[:6]:
                assert circle(gm, x, y) == spec.mul(x, y)

    def test_circle_inverse_identity(self):
        gm = identity_gamma(make_group("P2Q-Type1", 3, 7))
        spec = gm.spec
        assert circle_inverse(gm, spec.identity) == spec.identity

    def test_closed_form_inverse_matches_table(self, enum_cache):
        result = enum_cache("P2Q-Type4", 3, 2)
        spec = result.spec
        for rec in result.braces:
            circ = rec.circle_table
            for x in range(spec.n):
                z = circle_inverse(rec.gamma, spec.el(x))
                assert circ[spec.idx(z), x] == spec.identity_idx


class TestBraceRecords:
    def test_identity_gamma_record(self):
        spec = make_group("P2Q-Type2", 3, 7)
        rec = brace_from_gamma(identity_gamma(spec))
        assert rec.circle_type == "Type2"
        assert rec.kernel == frozenset(range(spec.n))

    def test_type4_inverse_inner_twist_gives_cyclic(self):
        spec = make_group("P2Q-Type4", 3, 2)
        ag = aut_group(spec)
        eta = int(ag.ainv[iota_idx(spec, E(1, 0))])
        rgf = rgf_from_generator(spec, E(1, 0), eta)
        gm = lift_rgf(spec, rgf, spec.cyclic_subgroup(spec.idx(E(0, 1))))
        rec = brace_from_gamma(gm)
        assert rec.circle_type == "Type1"
        assert set(spec.cyclic_subgroup(spec.idx(E(0, 1)))) <= rec.kernel

    def test_type3_unit_twist_gives_cyclic(self):
        spec = make_group("P2Q-Type3", 3, 19)
        ag = aut_group(spec)
        eta = int(ag.ainv[iota_idx(spec, E(1, 0))])  # iota(a^-1)
        rgf = rgf_from_generator(spec, E(1, 0), eta)
        gm = lift_rgf(spec, rgf, spec.cyclic_subgroup(spec.idx(E(0, 1))))
        assert brace_from_gamma(gm).circle_type == "Type1"

    def test_json_field_order(self):
        spec = make_group("P2Q-Type4", 3, 2)
        rec = brace_from_gamma(identity_gamma(spec))
        text = rec.to_json()
        assert text.startswith('{"group": {"family": "P2Q-Type4", "p": 3, "q": 2, "t": 8}, "gamma":')
        assert '"circle_type"' in text and '"kernel_size": 18' in text
        assert text.rstrip().endswith('"orbit_id": null}')

    def test_brace_axiom_exhaustive_small(self):
        spec = make_group("P2Q-Type4", 3, 2)
        brace.verify_brace_axiom(inversion_gamma(spec), exhaustive=True)


class TestNuSubgroup:
    def test_identity_gamma_gives_right_translations(self):
        spec = make_group("P2Q-Type1", 3, 2)
        assert nu_subgroup(identity_gamma(spec)) == {
            holomorph.rho(spec, g) for g in spec.elements()
        }

    def test_inversion_gamma_gives_left_translations(self):
        spec = make_group("P2Q-Type4", 3, 2)
        assert nu_subgroup(inversion_gamma(spec)) == {
            holomorph.lambda_rep(spec, g) for g in spec.elements()
        }

    def test_regular_and_injective_over_enumeration(self, enum_cache):
        result = enum_cache("P2Q-Type1", 3, 2)
        spec = result.spec
        seen = set()
        for rec in result.braces:
            nu = frozenset(nu_subgroup(rec.gamma))
            assert holomorph.is_regular(spec, nu)
            assert nu not in seen
            seen.add(nu)

    def test_round_trip_through_regular_subgroup(self, enum_cache):
        result = enum_cache("P2Q-Type4", 3, 2)
        spec = result.spec
        for rec in result.braces:
            back = gamma_from_regular(spec, nu_subgroup(rec.gamma))
            assert back.table == rec.gamma.table


class TestDuality:
    def test_dual_of_identity_is_inversion(self):
        spec = make_group("P2Q-Type4", 3, 2)
        assert dual_gamma(identity_gamma(spec)).table == inversion_gamma(spec).table

    def test_involution_over_enumeration(self, enum_cache):
        for rec in enum_cache("P2Q-Type4", 3, 2).braces:
            assert dual_gamma(dual_gamma(rec.gamma)).table == rec.gamma.table

    def test_abelian_dual_is_composition_with_inversion(self):
        spec = make_group("P2Q-Type1", 3, 7)
        gm = identity_gamma(spec)
        ag = aut_group(spec)
        eta = next(k for k in range(ag.size) if ag.order_of(k) == 3)
        rgf = rgf_from_generator(spec, E(1, 0), eta)
        gm = lift_rgf(spec, rgf, spec.cyclic_subgroup(spec.idx(E(0, 1))))
        dual = dual_gamma(gm)
        inv = spec.inv_table
        assert dual.table == tuple(gm.table[inv[x]] for x in range(spec.n))

    def test_dual_matches_inversion_conjugate_of_subgroup(self):
        spec = make_group("P2Q-Type4", 3, 2)
        gm = inversion_gamma(spec)
        lhs = nu_subgroup(dual_gamma(gm))
        rhs = {holomorph.conjugate_by_inv(spec, h) for h in nu_subgroup(gm)}
        assert lhs == rhs


class TestConjugation:
    def test_conjugate_by_identity(self):
        spec = make_group("P2Q-Type2", 3, 7)
        gm = inversion_gamma(spec)
        assert conjugate_gamma(gm, aut_group(spec).identity_idx).table == gm.table

    def test_trivial_gamma_is_fixed_by_everything(self):
        spec = make_group("P2Q-Type4", 3, 2)
        gm = identity_gamma(spec)
        for beta in range(aut_group(spec).size):
            assert conjugate_gamma(gm, beta).table == gm.table

    def test_conjugation_preserves_gfe(self):
        spec = make_group("P2Q-Type4", 3, 2)
        gm = inversion_gamma(spec)
        for beta in aut_group(spec).generators():
            assert check_gfe(conjugate_gamma(gm, beta))


class TestRgf:
    def test_identity_image_gives_trivial_rgf(self):
        spec = make_group("P2Q-Type1", 3, 7)
        ag = aut_group(spec)
        rgf = rgf_from_generator(spec, E(1, 0), ag.identity_idx)
        assert all(v == ag.identity_idx for v in rgf.values.values())

    def test_type1_twist_follows_partial_sums(self):
        from p2qbrace import arith

        spec = make_group("P2Q-Type1", 3, 7)
        ag = aut_group(spec)
        eta = next(
            k for k, aut in enumerate(ag.auts)
            if aut.img_a == spec.power(E(1, 0), 4) and aut.img_b == E(0, 1)
        )
        rgf = rgf_from_generator(spec, E(1, 0), eta)
        for k in range(9):
            el = spec.idx(spec.power(E(1, 0), arith.es(k, 4, 9)))
            assert rgf.values[el] == aut_power(spec, eta, k)

    def test_rejects_order_not_dividing(self):
        spec = make_group("P2Q-Type1", 3, 7)
        ag = aut_group(spec)
        eta = next(k for k in range(ag.size) if ag.order_of(k) == 2)
        with pytest.raises(brace.OrderTooBigError):
            rgf_from_generator(spec, E(1, 0), eta)  # 2 does not divide 9

    def test_rejects_moved_subgroup(self):
        spec = make_group("P2Q-Type3", 3, 19)
        sylows = spec.sylow_subgroups(9)
        # conjugation by a generator of one Sylow subgroup moves the others
        eta = iota_idx(spec, spec.el(sylows[0][0]))
        with pytest.raises(brace.NotInvariantError):
            rgf_from_generator(spec, spec.el(sylows[1][0]), eta)

    def test_invariant_sylow_is_unique_for_full_order_twists(self):
        # a full-order twist admits an RGF on exactly one of the q Sylow
        # p-subgroups; order-p twists from the center-avoiding factor
        # work on every one of them
        spec = make_group("P2Q-Type3", 3, 19)
        ag = aut_group(spec)
        sylows = spec.sylow_subgroups(9)
        assert len(sylows) == 19
        eta = iota_idx(spec, E(1, 0))  # inner, order 9
        hits = 0
        for gen_idx, _members in sylows:
            try:
                rgf_from_generator(spec, spec.el(gen_idx), eta)
                hits += 1
            except brace.NotInvariantError:
                pass
        assert hits == 1

    def test_psi_twists_work_on_every_sylow(self):
        from p2qbrace.groups import psi_for_A

        spec = make_group("P2Q-Type2", 3, 7)
        ag = aut_group(spec)
        psi = ag.index_of(psi_for_A(spec, E(1, 0)))
        for gen_idx, _members in spec.sylow_subgroups(9):
            rgf_from_generator(spec, spec.el(gen_idx), psi)  # must not raise

    def test_inner_twist_admits_one_sylow_choice_of_seven(self):
        # building the same twisted map from each of the q = 7 Sylow
        # complements succeeds exactly once, for the complement the inner
        # automorphism actually normalizes
        spec = make_group("P2Q-Type2", 3, 7)
        sylows = spec.sylow_subgroups(9)
        assert len(sylows) == 7
        eta = iota_idx(spec, spec.el(sylows[0][0]))
        outcomes = []
        for gen_idx, _members in sylows:
            try:
                rgf_from_generator(spec, spec.el(gen_idx), eta)
                outcomes.append(gen_idx)
            except brace.NotInvariantError:
                pass
        assert outcomes == [sylows[0][0]]

    def test_order_p_images_give_morphisms(self):
        # when the generator image has order exactly p, the resulting
        # map on the cyclic subgroup is multiplicative
        from p2qbrace.brace import rgf_is_morphism

        for family, p, q, order in [("P2Q-Type4", 3, 2, 9), ("P2Q-Type2", 3, 7, 9)]:
            spec = make_group(family, p, q)
            ag = aut_group(spec)
            gen_idx, members = spec.sylow_subgroups(order)[0]
            gen = spec.el(gen_idx)
            for eta in range(ag.size):
                if ag.order_of(eta) != p:
                    continue
                if int(ag.aperm[eta, gen_idx]) not in members:
                    continue
                assert rgf_is_morphism(rgf_from_generator(spec, gen, eta))


class TestLift:
    def test_lift_of_trivial_rgf(self):
        spec = make_group("P2Q-Type1", 3, 7)
        ag = aut_group(spec)
        rgf = rgf_from_generator(spec, E(1, 0), ag.identity_idx)
        gm = lift_rgf(spec, rgf, spec.cyclic_subgroup(spec.idx(E(0, 1))))
        assert gm.table == identity_gamma(spec).table

    def test_lift_kernel_contains_complement(self):
        spec = make_group("P2Q-Type1", 3, 7)
        ag = aut_group(spec)
        eta = next(k for k in range(ag.size) if ag.order_of(k) == 3)
        B = spec.cyclic_subgroup(spec.idx(E(0, 1)))
        gm = lift_rgf(spec, rgf_from_generator(spec, E(1, 0), eta), B)
        from p2qbrace.brace import kernel

        assert set(B) <= kernel(gm)

    def test_complement_invariance_failure(self):
        # lifting from <b> against a non-normal complement <a> in the
        # dihedral-like group: conjugation by b moves <a>
        spec = make_group("P2Q-Type4", 3, 2)
        ag = aut_group(spec)
        rgf = rgf_from_generator(spec, E(0, 1), ag.identity_idx)
        bad_rgf = brace.RGF(
            spec=spec,
            domain=rgf.domain,
            values={k: iota_idx(spec, spec.el(k)) for k in rgf.domain},
        )
        A = spec.cyclic_subgroup(spec.idx(E(1, 0)))
        with pytest.raises(brace.LiftPreconditionError, match="invariant"):
            lift_rgf(spec, bad_rgf, A)

    def test_intersection_failure(self):
        spec = make_group("P2Q-Type4", 3, 2)
        ag = aut_group(spec)
        eta = int(ag.ainv[iota_idx(spec, E(1, 0))])
        rgf = rgf_from_generator(spec, E(1, 0), eta)
        with pytest.raises(brace.LiftPreconditionError, match="intersection"):
            lift_rgf(spec, rgf, range(spec.n))  # complement = all of G


class TestInvariantSubgroups:
    @pytest.mark.parametrize("family,p,q", [("P2Q-Type4", 3, 2), ("P2Q-Type2", 3, 7)])
    def test_invariant_sylows_are_circle_subgroups(self, enum_cache, family, p, q):
        # a Sylow subgroup stable under its own gamma images is also a
        # subgroup for the circle operation
        result = enum_cache(family, p, q)
        spec = result.spec
        ag = aut_group(spec)
        sylows = [m for order in (spec.p * spec.p, spec.q)
                  for _gen, m in spec.sylow_subgroups(order)]
        for rec in result.braces:
            gt = rec.gamma.arr()
            for members in sylows:
                marr = np.array(members)
                images = ag.aperm[gt[marr][:, None], marr[None, :]]
                if np.isin(images, marr).all():
                    assert np.isin(rec.circle_table[np.ix_(marr, marr)], marr).all()

    @pytest.mark.parametrize("family,p,q", [("P2Q-Type4", 3, 2), ("P2Q-Type2", 3, 7)])
    def test_invariant_cyclic_generators_keep_their_order(self, enum_cache, family, p, q):
        # under the circle operation, a generator of an invariant cyclic
        # Sylow subgroup has the same order as under the group operation
        result = enum_cache(family, p, q)
        spec = result.spec
        ag = aut_group(spec)
        sylows = [gm for order in (spec.p * spec.p, spec.q)
                  for gm in spec.sylow_subgroups(order)]
        for rec in result.braces:
            gt = rec.gamma.arr()
            circ = rec.circle_table
            for gen, members in sylows:
                marr = np.array(members)
                images = ag.aperm[gt[marr][:, None], marr[None, :]]
                if not np.isin(images, marr).all():
                    continue
                k, cur = 1, gen
                while cur != spec.identity_idx:
                    cur = int(circ[cur, gen])
                    k += 1
                assert k == int(spec.orders[gen])


class TestMorphism:
    def test_identity_gamma(self):
        assert is_morphism(identity_gamma(make_group("P2Q-Type2", 3, 7)))

    def test_two_of_three_exchange(self, enum_cache):
        # for a gamma function that is also a morphism, the twisted
        # commutators x^-1 x^gamma(y) all land in the kernel
        result = enum_cache("P2Q-Type4", 3, 2)
        spec = result.spec
        ag = aut_group(spec)
        mt = spec.mul_table
        inv = spec.inv_table
        for rec in result.braces:
            if not is_morphism(rec.gamma):
                continue
            gt = rec.gamma.arr()
            for x in range(spec.n):
                for y in range(spec.n):
                    comm = int(mt[inv[x], ag.aperm[gt[y], x]])
                    assert gt[comm] == ag.identity_idx
