"""svirqk: exact symbolic engine for the quantum-deformed N=2 superconformal
algebra SVir_{q,k} — normal ordering on Verma modules, Kac determinants,
singular vectors, a twisted Wakimoto free-field oracle, and the q -> 1
classical-limit checks."""

__version__ = "0.1.0"
