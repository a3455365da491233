from hypothesis import strategies as st

from popsort.perms import Permutation


def perm_strategy(max_n: int = 8, min_n: int = 0):
    """Random permutations of length min_n..max_n in one-line notation."""
    return (
        st.integers(min_n, max_n)
        .flatmap(lambda n: st.permutations(tuple(range(1, n + 1))))
        .map(lambda vals: Permutation(tuple(vals)))
    )
