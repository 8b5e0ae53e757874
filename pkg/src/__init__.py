"""
Graph Thermometry Toolkit
Topology-dependent precision of finite quantum thermometers built on graphs.
"""

__version__ = "1.0.0"
__author__ = "Thermograph developers"
