"""
HWM Toolkit: hypergraph weighted models, their evaluation engines and constructions.

Author: HWM Toolkit Team
Date: 2026
"""

__version__ = "1.0.0"
