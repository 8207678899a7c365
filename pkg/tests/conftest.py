"""Shared fixtures: the expensive meshes and eigenpairs are built once."""

import numpy as np
import pytest

from liouville_lab import (assemble_stiffness, assemble_weighted_mass,
                           first_eigenpair, mesh_disk, u_lambda_field)

SQRT8 = np.sqrt(8.0)


@pytest.fixture(scope="session")
def disk_sqrt8_h05():
    return mesh_disk(SQRT8, 0.05)


@pytest.fixture(scope="session")
def weight_equality(disk_sqrt8_h05):
    return u_lambda_field(disk_sqrt8_h05, 1.0)


@pytest.fixture(scope="session")
def eigen_equality(disk_sqrt8_h05, weight_equality):
    K = assemble_stiffness(disk_sqrt8_h05)
    M = assemble_weighted_mass(disk_sqrt8_h05, weight_equality)
    return first_eigenpair(K, M)


@pytest.fixture(scope="session")
def disk_unit_h05():
    return mesh_disk(1.0, 0.05)
