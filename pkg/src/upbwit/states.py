"""Product-state sets, their Gram form Q, unextendibility, and built-in families."""

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .linalg import DimensionProfile, as_dims, kron, matrix_rank, null_space

UNIT_TOL = 1e-12
FILE_UNIT_TOL = 1e-9
RANK_TOL = 1e-9
MAX_ENUMERATION_MEMBERS = 20


class StateSetError(ValueError):
    pass


@dataclass(frozen=True)
class ProductVector:
    factors: tuple

    def __post_init__(self):
        factors = tuple(np.asarray(f, dtype=np.complex128).reshape(-1) for f in self.factors)
        for f in factors:
            if abs(np.linalg.norm(f) - 1) > UNIT_TOL:
                raise StateSetError(f"factor is not a unit vector (norm {np.linalg.norm(f):.15g})")
        object.__setattr__(self, "factors", factors)

    @property
    def dims(self):
        return tuple(len(f) for f in self.factors)

    def vector(self):
        return kron(*self.factors)


@dataclass(frozen=True)
class ProductStateSet:
    dims: DimensionProfile
    members: tuple
    name: str = ""

    def __post_init__(self):
        dims = as_dims(self.dims)
        members = tuple(x if isinstance(x, ProductVector) else ProductVector(x) for x in self.members)
        if len(members) < 1:
            raise StateSetError("a product-state set needs at least one member")
        for k, x in enumerate(members):
            if x.dims != dims.local_dims:
                raise StateSetError(f"member {k} has local dims {x.dims}, expected {dims.local_dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "members", members)

    @property
    def m(self):
        return len(self.members)

    def factor_matrix(self, party):
        """(m, d_party) array whose k-th row is the party factor of member k."""
        return np.stack([x.factors[party] for x in self.members])

    def vectors(self):
        """(m, N) array of the full product vectors."""
        return np.stack([x.vector() for x in self.members])

    def projectors(self):
        v = self.vectors()
        return np.einsum("ki,kj->kij", v, v.conj())

    def is_orthonormal(self, tol=1e-12):
        return bool(np.abs(gram_q(self) - np.eye(self.m)).max() <= tol)


@dataclass(frozen=True)
class PartitionCertificate:
    verdict: str  # "extendible" | "unextendible"
    partitions_examined: int
    witness_partition: tuple = None  # party index assigned to each member
    witness_vector: ProductVector = None
    complement_dim: int = field(default=0)

    @property
    def unextendible(self):
        return self.verdict == "unextendible"


def overlap_matrix(states):
    """Complex overlaps <phi_r|phi_k> computed factor by factor."""
    ret = np.ones((states.m, states.m), dtype=np.complex128)
    for j in range(states.dims.n):
        a = states.factor_matrix(j)
        ret = ret * (a.conj() @ a.T)
    return ret


def gram_q(states):
    """Q(r, k) = |<phi_r|phi_k>|^2."""
    q = np.abs(overlap_matrix(states)) ** 2
    q = (q + q.T) / 2
    np.fill_diagonal(q, 1.0)
    return q


def is_unextendible(states):
    """Decide whether any product vector is orthogonal to every member.

    A product vector ``a_1 x ... x a_n`` is orthogonal to member k iff some
    party j has ``<a_j|alpha_j(k)> = 0``. So an orthogonal product vector
    exists iff the members can be split among the parties such that every
    party's assigned factors span a proper subspace. The assignments are
    enumerated depth-first, abandoning a branch as soon as a party's span
    becomes full.
    """
    dims = states.dims
    m, n = states.m, dims.n
    if m > MAX_ENUMERATION_MEMBERS:
        raise StateSetError(f"m={m} exceeds the enumeration bound {MAX_ENUMERATION_MEMBERS}")
    factor = [states.factor_matrix(j) for j in range(n)]
    complement_dim = dims.N - matrix_rank(states.vectors(), RANK_TOL)
    assigned = [[] for _ in range(n)]
    examined = 0

    def search(k):
        nonlocal examined
        if k == m:
            examined += 1
            return True
        for j in range(n):
            assigned[j].append(k)
            if matrix_rank(factor[j][assigned[j]], RANK_TOL) < dims.local_dims[j]:
                if search(k + 1):
                    return True
            else:
                examined += 1
            assigned[j].pop()
        return False

    if not search(0):
        return PartitionCertificate("unextendible", examined, complement_dim=complement_dim)
    partition = [0] * m
    local = []
    for j in range(n):
        for k in assigned[j]:
            partition[k] = j
        rows = factor[j][assigned[j]]
        if len(assigned[j]) == 0:
            vec = np.zeros(dims.local_dims[j], dtype=np.complex128)
            vec[0] = 1
        else:
            # first null-space column of the conjugated rows: orthogonal to every assigned factor
            vec = null_space(rows.conj(), RANK_TOL)[:, 0]
        local.append(vec / np.linalg.norm(vec))
    witness = ProductVector(tuple(local))
    return PartitionCertificate(
        "extendible", examined, tuple(partition), witness, complement_dim=complement_dim
    )


def check_subset_basis_condition(states):
    """True iff every d-subset of first factors and of second factors is a basis.

    Only defined for the bipartite d x d template with 2d - 1 members.
    """
    dims = states.dims.local_dims
    if len(dims) != 2 or dims[0] != dims[1] or states.m != 2 * dims[0] - 1:
        raise StateSetError(
            f"subset-basis condition needs a d x d set with 2d-1 members, got dims={dims}, m={states.m}"
        )
    d = dims[0]
    for j in range(2):
        a = states.factor_matrix(j)
        for idx in itertools.combinations(range(states.m), d):
            if matrix_rank(a[list(idx)], RANK_TOL) < d:
                return False
    return True


def _unit(*x):
    x = np.asarray(x, dtype=np.complex128)
    return x / np.linalg.norm(x)


def tiles_normalizer(t):
    return (1 + t) ** 2 + 2


def _tiles(t=0.0):
    e0, e1, e2 = np.eye(3, dtype=np.complex128)
    gamma = _unit(1, 1, 1)
    c = tiles_normalizer(t)
    if not np.isfinite(c) or c == 0:
        raise StateSetError(f"t={t} does not give a normalizable vector")
    last = np.array([1 + t, 1, 1], dtype=np.complex128) / np.sqrt(c)
    members = [
        (e0, _unit(1, -1, 0)),
        (e2, _unit(0, 1, -1)),
        (_unit(1, -1, 0), e2),
        (_unit(0, 1, -1), e0),
        (gamma, last),
    ]
    return members


def _example_b2():
    s = 1 / np.sqrt(2)
    a1 = np.array([s, s])
    a2 = np.array([s, -s])
    a3 = np.array([s, 1j * s])
    b3 = np.array([s, -1j * s])
    return [(a1, a1), (a2, a2), (a3, b3)]


FAMILIES = {
    "tiles": "orthogonal 3x3 TILES UPB (5 members)",
    "example_b2": "non-orthogonal 2x2 set of three product states",
    "tiles_perturbed": "TILES with the last member's second factor tilted by t",
}


def builtin_family(name, t=None):
    name = str(name).lower()
    if name == "tiles":
        return ProductStateSet((3, 3), _tiles(), name="tiles")
    if name == "example_b2":
        return ProductStateSet((2, 2), _example_b2(), name="example_b2")
    if name == "tiles_perturbed":
        t = 0.0 if t is None else float(t)
        return ProductStateSet((3, 3), _tiles(t), name=f"tiles_perturbed(t={t:g})")
    raise StateSetError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}")


def _parse_vector(raw):
    arr = np.asarray(raw, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise StateSetError("complex scalars must be [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def state_set_from_dict(data, normalize=False, name=""):
    try:
        dims = as_dims(data["dims"])
        members = []
        for k, raw_member in enumerate(data["members"]):
            if len(raw_member) != dims.n:
                raise StateSetError(f"member {k} has {len(raw_member)} factors, expected {dims.n}")
            factors = []
            for j, raw in enumerate(raw_member):
                vec = _parse_vector(raw)
                norm = np.linalg.norm(vec)
                if norm == 0:
                    raise StateSetError(f"member {k} factor {j} is zero")
                if not normalize and abs(norm - 1) > FILE_UNIT_TOL:
                    raise StateSetError(f"member {k} factor {j} has norm {norm:.12g}, not 1")
                factors.append(vec / norm)
            members.append(tuple(factors))
        return ProductStateSet(dims, members, name=data.get("name", name))
    except (KeyError, TypeError) as e:
        raise StateSetError(f"malformed product-state set: {e!r}") from e


def state_set_to_dict(states):
    return {
        "name": states.name,
        "dims": list(states.dims.local_dims),
        "members": [
            [[[float(z.real), float(z.imag)] for z in f] for f in x.factors] for x in states.members
        ],
    }


def load_state_set(path, normalize=False):
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise StateSetError(f"{path}: invalid JSON ({e})") from e
    return state_set_from_dict(data, normalize=normalize, name=path.stem)


def save_state_set(states, path):
    Path(path).write_text(json.dumps(state_set_to_dict(states), indent=2) + "\n")
