from fractions import Fraction
from itertools import product as cartesian

from menulab.errors import InputError
from menulab.model.distribution_model import JointDistribution, SingleItemDistribution


def product(parts: list[SingleItemDistribution]) -> JointDistribution:
    if not parts:
        raise InputError("product of zero distributions")
    atoms = []
    for combo in cartesian(*(part.atoms for part in parts)):
        prob = Fraction(1)
        for _, p in combo:
            prob *= p
        atoms.append((tuple(v for v, _ in combo), prob))
    return JointDistribution(n=len(parts), atoms=atoms)


def power(part: SingleItemDistribution, n: int) -> JointDistribution:
    return product([part] * n)


def marginal(dist: JointDistribution, item: int) -> SingleItemDistribution:
    if not 1 <= item <= dist.n:
        raise InputError(f"item {item} outside 1..{dist.n}")
    return SingleItemDistribution(atoms=[(v[item - 1], p) for v, p in dist.atoms])


def marginals(dist: JointDistribution) -> list[SingleItemDistribution]:
    return [marginal(dist, i) for i in range(1, dist.n + 1)]


def is_product(dist: JointDistribution) -> bool:
    return product(marginals(dist)) == dist


def iid_marginal(dist: JointDistribution) -> SingleItemDistribution:
    """The common marginal F when ``dist`` is F x ... x F, else InputError."""
    parts = marginals(dist)
    if any(part != parts[0] for part in parts) or product(parts) != dist:
        raise InputError("distribution is not IID across items")
    return parts[0]


def mixture(first: JointDistribution, second: JointDistribution, weight) -> JointDistribution:
    weight = Fraction(weight)
    if first.n != second.n:
        raise InputError("mixing distributions over different item counts")
    if not 0 <= weight <= 1:
        raise InputError(f"mixture weight {weight} outside [0,1]")
    atoms = [(v, weight * p) for v, p in first.atoms if weight]
    atoms += [(v, (1 - weight) * p) for v, p in second.atoms if weight != 1]
    return JointDistribution(n=first.n, atoms=atoms)


def permute(dist: JointDistribution, order: tuple[int, ...]) -> JointDistribution:
    """Relabel items: new item k carries old item ``order[k]`` (1-based)."""
    return JointDistribution(
        n=dist.n, atoms=[(tuple(v[i - 1] for i in order), p) for v, p in dist.atoms])


def reflect(dist: JointDistribution) -> JointDistribution:
    order = (2, 1) + tuple(range(3, dist.n + 1))
    return permute(dist, order)


def is_exchangeable(dist: JointDistribution) -> bool:
    if dist.n < 2:
        return True
    # a transposition and an n-cycle generate all permutations
    shift = tuple(range(2, dist.n + 1)) + (1,)
    return reflect(dist) == dist and permute(dist, shift) == dist
