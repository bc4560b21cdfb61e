import pytest

from ratsurf.construction import anticanonical_cluster, h0_antimultiple
from ratsurf.pencils import Cluster, ClusterError, ClusterPoint, linear_system_dim


def point(label, *pos, parent=None, m=1):
    return ClusterPoint(label, parent, tuple(pos), m)


def test_empty_cluster_counts_monomials():
    assert linear_system_dim(3, Cluster()) == 10
    assert linear_system_dim(0, Cluster()) == 1
    assert linear_system_dim(2, Cluster()) == 6


def test_general_points_impose_independent_conditions():
    pts = [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1), (2, 3, 1)]
    cl = Cluster(tuple(point(f"E{i + 1}", *p) for i, p in enumerate(pts)))
    assert linear_system_dim(2, cl) == 1
    assert linear_system_dim(3, cl) == 5


def test_multiplicity_two():
    cl = Cluster((point("E1", 0, 0, 1, m=2),))
    assert linear_system_dim(2, cl) == 3  # pairs of lines through the point
    assert linear_system_dim(3, cl) == 7


def test_infinitely_near_point_is_a_tangent_condition():
    cl = Cluster((point("E1", 0, 0, 1), point("E2", 1, 0, parent="E1")))
    assert linear_system_dim(1, cl) == 1  # only y
    assert linear_system_dim(2, cl) == 4


def test_negative_degree_rejected():
    with pytest.raises(ClusterError):
        linear_system_dim(-1, Cluster())


def test_anticanonical_dimension_untwisted(e8, d8):
    assert linear_system_dim(3, anticanonical_cluster(e8.cluster)) == 2
    assert linear_system_dim(3, anticanonical_cluster(d8.cluster)) == 2


def test_anticanonical_dimension_twisted(e8_twisted, d8_twisted):
    assert linear_system_dim(3, anticanonical_cluster(e8_twisted.cluster)) == 1
    assert linear_system_dim(3, anticanonical_cluster(d8_twisted.cluster)) == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_multiples(e8, e8_twisted, n):
    assert h0_antimultiple(e8.cluster, n) == n + 1
    assert h0_antimultiple(e8_twisted.cluster, n) == 1


def test_monotone_in_cluster(e8_twisted):
    pts = e8_twisted.cluster.points
    dims = [linear_system_dim(3, Cluster(pts[:k])) for k in range(len(pts) + 1)]
    assert dims[0] == 10
    assert all(a >= b for a, b in zip(dims, dims[1:]))
