from .engine import EmpiricalProfile, SimConfig, SimResult, Simulator, SlotRecord, pool_profiles, run_simulation
from .topology import Topology, build_topology
