"""Independent reference computations built on sympy coset enumeration.

These work from the abstract presentations (Coxeter relators plus the family
relator), never from the affine model used by the package.
"""

from functools import reduce

from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group

from toromaps.toroidal_groups import COXETER, family_relator

# words for the named translations, letters are generator indices
TRANSLATION_WORDS = {
    "44": {"u": (0, 1, 2, 1), "v": (1, 0, 1, 2, 1, 1)},
    "36": {"u": (0, 1, 2, 1, 2, 1), "v": (1, 0, 1, 2, 1, 2, 1, 1)},
}


def presentation(family, s):
    F, r0, r1, r2 = free_group("r0 r1 r2")
    gens = (r0, r1, r2)
    p, q = COXETER[family.kind]
    rels = [r0**2, r1**2, r2**2, (r0 * r2) ** 2, (r0 * r1) ** p, (r1 * r2) ** q]
    rels.append(to_word(gens, F, family_relator(family, s)))
    return F, gens, FpGroup(F, rels)


def to_word(gens, F, letters):
    return reduce(lambda x, y: x * y, [gens[i] for i in letters], F.identity)


def coset_perms(family, s, subgroup_words):
    """Permutations of r0, r1, r2 on the cosets of the subgroup generated by the given letter words."""
    F, gens, G = presentation(family, s)
    H = [to_word(gens, F, w) for w in subgroup_words]
    C = G.coset_enumeration(H)
    C.compress()
    C.standardize()
    table = C.table
    # columns alternate generator, inverse; involutions make them equal
    return [Permutation([row[2 * i] for row in table]) for i in range(3)]


def is_faithful(family, s, subgroup_words):
    perms = coset_perms(family, s, subgroup_words)
    return PermutationGroup(perms).order() == family.flag_count(s), perms[0].size


def string_c_holds(family, s):
    """Rank-3 intersection condition <r0,r1> meet <r1,r2> = <r1> via the regular action."""
    perms = coset_perms(family, s, [])
    P = PermutationGroup
    A = set(P([perms[0], perms[1]]).generate())
    B = set(P([perms[1], perms[2]]).generate())
    return len(A & B) == len(set(P([perms[1]]).generate()))
