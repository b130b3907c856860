"""Physical parameters of the elastic medium and derived wave constants.

A homogeneous isotropic medium is characterized by the Lamé constants
(lam, mu), the mass density rho and the angular frequency omega. All
wavenumbers and auxiliary constants used by the kernels and the
regularized hypersingular formulation are derived here once and shared.
"""

from dataclasses import dataclass, field
import math


@dataclass(frozen=True)
class Material:
    """Elastic medium parameters with derived constants.

    Attributes
    ----------
    lam, mu : float
        Lamé constants; mu > 0 and lam + mu > 0 are required.
    rho : float
        Mass density, > 0.
    omega : float
        Angular frequency, > 0.
    k_s, k_p : float
        Shear and pressure wavenumbers, k_p < k_s.
    mu_tilde, lam_tilde : float
        Coefficients of the modified (unphysical) traction operator for
        which the associated double-layer kernel is weakly singular.
        mu_tilde + lam_tilde == mu + lam holds exactly.
    c_lm : float
        Spectral accumulation shift mu / (2 (lam + 2 mu)); in (0, 1/2).
    """

    lam: float
    mu: float
    rho: float
    omega: float
    k_s: float = field(init=False)
    k_p: float = field(init=False)
    mu_tilde: float = field(init=False)
    lam_tilde: float = field(init=False)
    c_lm: float = field(init=False)

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"mu > 0 required, got mu={self.mu}")
        if not self.lam + self.mu > 0:
            raise ValueError(
                f"lam + mu > 0 required, got lam+mu={self.lam + self.mu}"
            )
        if not self.rho > 0:
            raise ValueError(f"rho > 0 required, got rho={self.rho}")
        if not self.omega > 0:
            raise ValueError(f"omega > 0 required, got omega={self.omega}")
        mu_t = self.mu * (self.lam + self.mu) / (self.lam + 3 * self.mu)
        object.__setattr__(self, "k_s", self.omega * math.sqrt(self.rho / self.mu))
        object.__setattr__(
            self, "k_p", self.omega * math.sqrt(self.rho / (self.lam + 2 * self.mu))
        )
        object.__setattr__(self, "mu_tilde", mu_t)
        object.__setattr__(self, "lam_tilde", self.lam + self.mu - mu_t)
        object.__setattr__(self, "c_lm", self.mu / (2 * (self.lam + 2 * self.mu)))

    def with_physical_traction(self) -> "Material":
        """Copy with mu_tilde = mu, lam_tilde = lam.

        Used to obtain the physical hypersingular operator from the same
        regularized assembly path as the modified one.
        """
        m = Material(self.lam, self.mu, self.rho, self.omega)
        object.__setattr__(m, "mu_tilde", self.mu)
        object.__setattr__(m, "lam_tilde", self.lam)
        return m


def make_material(lam: float, mu: float, rho: float, omega: float) -> Material:
    """Construct a validated Material with all derived constants."""
    return Material(lam=lam, mu=mu, rho=rho, omega=omega)
