from itertools import product
from math import comb

import pytest
from hypothesis import given, strategies as st

from pathhom.errors import NotConnected
from pathhom.picomb import (
    ConnectedMap,
    Shuffle,
    SquarePair,
    connected_maps,
    count_box_paths,
    edge_lemma_holds,
    enumerate_ppi_square,
    enumerate_ps_square,
    enumerate_shuffles,
    from_normal_form,
    normal_form,
    shuffle_graph,
    standard_decomposition,
)


def connected_map_strategy(max_n=6):
    return st.tuples(st.integers(0, 3), st.lists(st.sampled_from([0, 1]), max_size=max_n), st.integers(0, 3)).map(
        lambda t: ConnectedMap(t[0] + sum(t[1]) + t[2], tuple(t[0] + sum(t[1][:i]) for i in range(len(t[1]) + 1))))


# ---------------------------------------------------------------------------
# connected maps and normal forms


def test_normal_form_of_identity_is_empty():
    assert normal_form(ConnectedMap.identity(4)) == (0, 0, [])


def test_normal_form_of_single_codegeneracy():
    assert normal_form(ConnectedMap.codegeneracy(1, 2)) == (0, 0, [1])


def test_normal_form_of_middle_inclusion():
    f = ConnectedMap(3, (1, 2))
    assert normal_form(f) == (1, 1, [])
    injective = [g for g in connected_maps(1, 3) if g.is_injective()]
    assert [normal_form(g) for g in injective] == [(2, 0, []), (1, 1, []), (0, 2, [])]


def test_disconnected_values_are_rejected():
    with pytest.raises(NotConnected):
        ConnectedMap(3, (0, 2))
    with pytest.raises(NotConnected):
        ConnectedMap(3, (1, 0))


@given(connected_map_strategy())
def test_normal_form_recomposes(f):
    k, l, idx = normal_form(f)
    assert from_normal_form(k, l, idx, f.domain) == f


@given(connected_map_strategy(4), st.data())
def test_composition_of_connected_maps_is_connected(g, data):
    f = data.draw(st.sampled_from(list(connected_maps(g.codomain, g.codomain + 1))))
    h = f.after(g)
    assert h.domain == g.domain and h.codomain == f.codomain


def test_normal_forms_are_unique():
    for n, m in product(range(4), range(4)):
        maps = list(connected_maps(n, m))
        assert len({(h, t, tuple(i)) for h, t, i in map(normal_form, maps)}) == len(maps)


# ---------------------------------------------------------------------------
# shuffles


@pytest.mark.parametrize("k", [0, 1, 4])
def test_zero_k_shuffle_is_unique_and_positive(k):
    out = enumerate_shuffles(0, k)
    assert len(out) == 1 and out[0][1] == 1


def test_one_one_shuffles_have_opposite_signs():
    signs = sorted(s for _, s in enumerate_shuffles(1, 1))
    assert signs == [-1, 1]


def test_four_three_shuffle_example_is_listed():
    shuffles = [s for s, _ in enumerate_shuffles(4, 3)]
    assert Shuffle((0, 2, 3, 5), (1, 4, 6)) in shuffles
    assert len(shuffles) == comb(7, 3)


@pytest.mark.parametrize("l,k", [(a, b) for a in range(5) for b in range(5)])
def test_shuffle_count_and_sign_parity(l, k):
    out = enumerate_shuffles(l, k)
    assert len(out) == comb(l + k, k)
    for s, sign in out:
        # the left factor sits at the nu positions, so the merge reads nu then mu
        perm = list(s.nu) + list(s.mu)
        inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
        assert sign == (-1) ** inversions


def test_example_arrow_of_the_shuffle_graph():
    s = Shuffle((0, 2, 3, 5), (1, 4, 6))
    assert s.flip(5) == Shuffle((0, 2, 3, 4), (1, 5, 6))
    assert (s, s.flip(5), 5) in shuffle_graph(4, 3).edges


def test_single_vertex_shuffle_graph():
    g = shuffle_graph(1, 0)
    assert len(g.vertices) == 1 and g.edges == ()


@pytest.mark.parametrize("l,k", [(a, b) for a in range(6) for b in range(6)])
def test_shuffle_graph_is_weakly_connected(l, k):
    assert shuffle_graph(l, k).is_weakly_connected()


@pytest.mark.parametrize("l,k", [(a, b) for a in range(5) for b in range(5)])
def test_adjacent_shuffles_have_opposite_signs(l, k):
    for a, b, _ in shuffle_graph(l, k).edges:
        assert a.sign == -b.sign


@pytest.mark.parametrize("n", range(1, 9))
def test_edge_lemma_for_every_edge(n):
    for l in range(n + 1):
        for a, b, i in shuffle_graph(l, n - l).edges:
            assert edge_lemma_holds(a, b, i)


# ---------------------------------------------------------------------------
# square pairs


def brute_force_box_walks(n, k, l):
    """Walks of length n in the grid [k] x [l] stepping by stay, right or up."""
    steps = [(0, 0), (1, 0), (0, 1)]
    count = 0
    for start in product(range(k + 1), range(l + 1)):
        for path in product(steps, repeat=n):
            x, y = start
            ok = True
            for dx, dy in path:
                x, y = x + dx, y + dy
                ok = ok and x <= k and y <= l
            count += ok
    return count


@pytest.mark.parametrize("n,k,l", [(n, k, l) for n in range(4) for k in range(3) for l in range(3)])
def test_square_pairs_count_box_paths(n, k, l):
    pairs = enumerate_ppi_square(n, k, l)
    assert len(pairs) == count_box_paths(n, k, l) == brute_force_box_walks(n, k, l)


@pytest.mark.parametrize("k,l", [(1, 2), (2, 2), (0, 3)])
def test_vertex_pairs_in_degree_zero(k, l):
    assert len(enumerate_ppi_square(0, k, l)) == (k + 1) * (l + 1)


@pytest.mark.parametrize("k,l", [(a, b) for a in range(4) for b in range(4)])
def test_surjective_nondegenerate_pairs_are_the_shuffles(k, l):
    pairs = enumerate_ps_square(k + l, k, l)
    shuffles = {(s.mu_map(), s.nu_map()) for s, _ in enumerate_shuffles(l, k)}
    assert {(p.f, p.g) for p in pairs} == shuffles
    for n in range(k + l + 3):
        if n != k + l:
            assert enumerate_ps_square(n, k, l) == []


def test_decomposition_of_identities_on_a_point():
    d = standard_decomposition(SquarePair(ConnectedMap.identity(0), ConnectedMap.identity(0)))
    assert d.alpha == d.beta == d.sigma == ConnectedMap.identity(0)
    assert d.mu == () and d.nu == ()


@pytest.mark.parametrize("l,k", [(1, 2), (2, 2), (3, 1)])
def test_decomposition_of_shuffle_pairs_is_trivial(l, k):
    for s, _ in enumerate_shuffles(l, k):
        d = standard_decomposition(SquarePair(s.mu_map(), s.nu_map()))
        assert d.alpha == ConnectedMap.identity(k) and d.sigma == ConnectedMap.identity(k)
        assert d.beta == ConnectedMap.identity(l)
        assert (d.mu, d.nu) == (s.mu, s.nu)


def all_decompositions(p: SquarePair):
    """Every (alpha, sigma, mu, beta, nu) recomposing to p, found by exhaustive search."""
    n = p.n
    found = []
    for mu_len in range(n + 1):
        for s, _ in enumerate_shuffles(mu_len, n - mu_len):
            s_mu, s_nu = s.mu_map(), s.nu_map()
            betas = [b for b in connected_maps(s_nu.codomain, p.g.codomain) if b.is_injective()]
            for beta in betas:
                if beta.after(s_nu) != p.g:
                    continue
                for m in range(s_mu.codomain + 1):
                    for sigma in connected_maps(s_mu.codomain, m):
                        if not sigma.is_surjective():
                            continue
                        for alpha in connected_maps(m, p.f.codomain):
                            if alpha.is_injective() and alpha.after(sigma).after(s_mu) == p.f:
                                found.append((alpha, sigma, s.mu, beta, s.nu))
    return found


@pytest.mark.parametrize("n,k,l", [(n, k, l) for n in range(4) for k in range(3) for l in range(3)])
def test_standard_decomposition_is_the_unique_factorisation(n, k, l):
    for p in enumerate_ppi_square(n, k, l):
        d = standard_decomposition(p)
        assert d.recompose(n) == (p.f, p.g)
        assert all_decompositions(p) == [(d.alpha, d.sigma, d.mu, d.beta, d.nu)]


@pytest.mark.parametrize("n", [4, 5])
def test_standard_decomposition_recomposes_up_to_degree_five(n):
    for p in enumerate_ppi_square(n, 2, 2):
        assert standard_decomposition(p).recompose(n) == (p.f, p.g)
