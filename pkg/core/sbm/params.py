from dataclasses import dataclass
from enum import Enum

from core.errors import ParameterError


class Mode(str, Enum):
    """Community structure orientation."""
    ASSORTATIVE = 'assort'
    DISSORTATIVE = 'dissort'

    @property
    def sign(self) -> int:
        return 1 if self is Mode.ASSORTATIVE else -1


@dataclass(frozen=True)
class ModelParams:
    """
    Parameters of the two-community block model G(n, a/n, b/n).

    Attributes:
        n: Node count.
        a: Within-community rate, edge probability a/n.
        b: Cross-community rate, edge probability b/n.
        mode: Assortative (a >= b) or dissortative (b >= a).

    Derived:
        k: Average degree (a + b) / 2.
        eps: Noise b / (a + b).
    """
    n: int
    a: float
    b: float
    mode: Mode = Mode.ASSORTATIVE

    def __post_init__(self):
        object.__setattr__(self, 'mode', Mode(self.mode))
        if self.n < 1:
            raise ParameterError(f"Node count must be at least 1, got {self.n}")
        if self.a < 0 or self.b < 0:
            raise ParameterError(f"Rates must be non-negative, got a={self.a}, b={self.b}")
        if self.a + self.b <= 0:
            raise ParameterError("At least one of a, b must be positive")
        if self.a / self.n > 1 or self.b / self.n > 1:
            raise ParameterError(f"Edge probabilities a/n={self.a / self.n}, b/n={self.b / self.n} exceed 1")
        if self.mode is Mode.ASSORTATIVE and self.a < self.b:
            raise ParameterError(f"Assortative mode needs a >= b, got a={self.a}, b={self.b}")
        if self.mode is Mode.DISSORTATIVE and self.b < self.a:
            raise ParameterError(f"Dissortative mode needs b >= a, got a={self.a}, b={self.b}")

    @classmethod
    def from_degree(cls, n: int, k: float, eps: float, mode: Mode = Mode.ASSORTATIVE) -> 'ModelParams':
        """
        Build parameters from average degree and noise using a = 2k(1 - eps), b = 2k eps.

        :param n: Node count.
        :param k: Average degree.
        :param eps: Noise in [0, 1].
        :param mode: Community orientation.
        :return: The corresponding parameters.
        :rtype: ModelParams
        """
        if not 0 <= eps <= 1:
            raise ParameterError(f"Noise must lie in [0, 1], got {eps}")
        return cls(n=n, a=2 * k * (1 - eps), b=2 * k * eps, mode=mode)

    @property
    def k(self) -> float:
        return (self.a + self.b) / 2

    @property
    def eps(self) -> float:
        return self.b / (self.a + self.b)

    @property
    def flip_noise(self) -> float:
        """Noise measured against the mode's favoured relation; below 1/2 whenever there is signal."""
        return self.eps if self.mode is Mode.ASSORTATIVE else 1 - self.eps

    @property
    def delta(self) -> float:
        from core.graph_adversary.adversary import delta_of_eps

        # null model: the cut rule carries no information, nothing is cut
        if self.flip_noise >= 0.5:
            return 0.0
        return delta_of_eps(self.flip_noise)

    @property
    def has_signal(self) -> bool:
        return self.a != self.b
