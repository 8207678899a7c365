"""Numerical verification lab for Liouville subsolutions, the weighted first
eigenvalue, and the Alexandrov-Bol inequality on planar domains."""

from .mesh import (Mesh, mesh_disk, mesh_annulus, mesh_mapped_disk, refine,
                   fill_holes, translate, disjoint_union, dump_mesh,
                   mesh_checksum)
from .fields import (ScalarField, SubsolutionReport, NewtonDiverged, u_lambda,
                     u_lambda_field, constant_field, liouville_residual,
                     weak_subsolution_check, solve_liouville_dirichlet,
                     normalize_gauge, total_mass, boundary_weight, dump_field)
from .conformal import ConformalMap, NotInImage, parse_map, pullback_field
from .spectral import (EigenPair, IterationStalled, assemble_stiffness,
                       assemble_weighted_mass, first_eigenpair)
from .levelset import (LevelSetProfile, Decomposition, AppendixSplit,
                       AuditReport, level_profile, bol_defect, huber_defect,
                       isoperimetric_defect, decompose, extend_hat,
                       appendix_audit)
from .rearrange import (RearrangedField, RayleighChainReport, rearrange,
                        dirichlet_energy, radial_dirichlet_energy,
                        rayleigh_chain_report)

__version__ = "0.1.0"
