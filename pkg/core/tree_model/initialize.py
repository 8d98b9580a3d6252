from core.errors import ParameterError
from core.sbm.params import Mode
from core.tree_model.adversaries import (conjugate, cutting_adversary_majority_breaker, strong_adversary_asymmetric,
                                         strong_adversary_opposite_path)
from core.tree_model.sampling import sample_dist2, sample_dist4, sample_plain, sample_regular
from core.tree_model.tree import Tree


def _none(t: Tree, **options) -> Tree:
    return t


def _cutting(t: Tree, **options) -> Tree:
    return cutting_adversary_majority_breaker(t)


def _opposite_path(t: Tree, **options) -> Tree:
    return strong_adversary_opposite_path(t)


def _asymmetric(t: Tree, eps: float = 0.0, asym: float = 0.0, sign: int = 1, seed: int = 0, **options) -> Tree:
    return strong_adversary_asymmetric(t, eps, asym, sign, seed)


# Slug -> tree adversary; every entry accepts the tree plus keyword options
adversaries = {
    'none': _none,
    'cutting': _cutting,
    'opp-path': _opposite_path,
    'asym': _asymmetric,
}

# Dissortative counterparts act between two odd-level spin flips
dissortative_adversaries = {slug: conjugate(adversary) for slug, adversary in adversaries.items()}

# Slug -> sampler(k, eps, depth, seed, ...); d3 is the same law as d2
samplers = {
    'plain': sample_plain,
    'regular': sample_regular,
    'd2': sample_dist2,
    'd3': sample_dist2,
    'd4': sample_dist4,
}

# Laws whose samplers take the mode themselves
MODE_AWARE_LAWS = ('d2', 'd3', 'd4')


def sampling_noise(adversary: str, eps: float, asym: float, mode: Mode) -> float:
    """
    Flip probability to sample with so that ``adversary`` leaves a tree of noise ``eps``.

    The asymmetric adversary thins a tree of noise eps + asym; in the dissortative mode that
    sum is taken after the odd-level flip, so the raw noise moves down by asym.
    """
    if adversary != 'asym' or asym == 0:
        return eps
    return eps + asym if Mode(mode) is Mode.ASSORTATIVE else eps - asym


def attacked_tree(sampler: str, adversary: str, k: float, eps: float, depth: int, seed: int,
                  mode: Mode = Mode.ASSORTATIVE, asym: float = 0.0, sign: int = 1) -> Tree:
    """
    Sample a tree from the named law and run the named adversary on it.

    :param sampler: Tree law slug, a key of :data:`samplers`.
    :param adversary: Adversary slug, a key of :data:`adversaries`.
    :param eps: Flip probability of the resulting tree; above 1/2 in the dissortative mode.
    :param asym: Asymmetry for the ``asym`` adversary.
    :param sign: Thinned spin for the ``asym`` adversary.
    :rtype: Tree
    :raises ParameterError: On an unknown slug or out-of-range noise.
    """
    mode = Mode(mode)
    if sampler not in samplers:
        raise ParameterError(f"Unknown tree law '{sampler}'")
    registry = dissortative_adversaries if mode is Mode.DISSORTATIVE else adversaries
    if adversary not in registry:
        raise ParameterError(f"Unknown tree adversary '{adversary}'")
    options = {'mode': mode} if sampler in MODE_AWARE_LAWS else {}
    t = samplers[sampler](k, sampling_noise(adversary, eps, asym, mode), depth, seed, **options)
    flip_noise = eps if mode is Mode.ASSORTATIVE else 1 - eps
    return registry[adversary](t, eps=flip_noise, asym=asym, sign=sign, seed=seed)
