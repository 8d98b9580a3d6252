from core.sbm.params import Mode
from core.tree_model.tree import Tree, flip_odd_levels
from core.tree_reconstruct.estimators import RootEstimate, majority_vote, recursive_majority
from core.tree_reconstruct.posterior import PosteriorModel, exact_posterior


def _majority(t: Tree, seed: int, eps: float, model: str, mode: Mode) -> RootEstimate:
    if Mode(mode) is Mode.DISSORTATIVE:
        t = flip_odd_levels(t)
    return majority_vote(t, seed)


def _recursive_majority(t: Tree, seed: int, eps: float, model: str, mode: Mode) -> RootEstimate:
    return recursive_majority(t, seed, mode)


def _map(t: Tree, seed: int, eps: float, model: str, mode: Mode) -> RootEstimate:
    if Mode(mode) is Mode.DISSORTATIVE:
        t, eps = flip_odd_levels(t), 1 - eps
    return exact_posterior(t, PosteriorModel(model, eps))


# Slug -> estimator(t, seed, eps, model, mode); model names the posterior law for 'map'
estimators = {
    'maj': _majority,
    'recmaj': _recursive_majority,
    'map': _map,
}
