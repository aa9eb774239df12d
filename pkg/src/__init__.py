# moritakit: exact computations over Morita rings
__version__ = "0.1.0"
