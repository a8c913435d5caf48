"""Hudson Bay hare and lynx record, 1900-1920, and the published fit."""
from __future__ import annotations

# (year, hares in thousands, lynx in thousands)
HUDSON_BAY = (
    (1900, 30.0, 4.0),
    (1901, 47.2, 6.1),
    (1902, 70.2, 9.8),
    (1903, 77.4, 35.2),
    (1904, 36.3, 59.4),
    (1905, 20.6, 41.7),
    (1906, 18.1, 19.0),
    (1907, 21.4, 13.0),
    (1908, 22.0, 8.3),
    (1909, 25.4, 9.1),
    (1910, 27.1, 7.4),
    (1911, 40.3, 8.0),
    (1912, 57.0, 12.3),
    (1913, 76.6, 19.5),
    (1914, 52.3, 45.7),
    (1915, 19.5, 51.1),
    (1916, 11.2, 29.7),
    (1917, 7.6, 15.8),
    (1918, 14.6, 9.7),
    (1919, 16.2, 10.1),
    (1920, 24.7, 8.6),
)

THOUSAND = 1e3

# Reduced-model constants of the published hare-lynx fit.  mu_N and mu_P are
# fixed life expectancies (1 and 7 years); the rest were fitted.
TABLE2 = dict(
    beta_N=1.6567,
    mu_N=1.0,
    K=303000.0,
    kappa=3.2e-5,
    chi=0.11,
    beta_P=8.5127,
    mu_P=1.0 / 7.0,
    eta=9.24,
)

FIXED_DEFAULTS = {"mu_N": 1.0, "mu_P": 1.0 / 7.0}
FREE_DEFAULTS = ("beta_N", "K", "kappa", "chi", "beta_P", "eta")
