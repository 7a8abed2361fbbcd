"""Counting backend for categories of quiver representations over F_p.

Everything the algebra layers consume lives here: isoclass registries,
Hall numbers g^L_{MN}, automorphism counts a_M, Euler forms, and
filtration counts.  All counting is exact brute force over the finite
field, guarded by the enumeration budget.
"""

import itertools
import json
import threading

from .caps import Budget
from .fq import (FpMatrix, enumerate_subspaces, gaussian_binomial, gl_order,
                 in_rowspace, rank, reduce_against, rowspace_coords,
                 solve_nullspace)
from .quiver import add_class, preset
from .scalars import is_prime


class Rep:
    """A representation: one F_p space per vertex, one matrix per arrow.

    maps[a] has shape (dims[t], dims[s]) for arrow a: s -> t and acts on
    column vectors.
    """

    __slots__ = ("quiver", "p", "dims", "maps", "_key")

    def __init__(self, quiver, p, dims, maps):
        assert is_prime(p)
        dims = tuple(int(d) for d in dims)
        assert len(dims) == quiver.n and all(d >= 0 for d in dims)
        maps = tuple(maps)
        assert len(maps) == len(quiver.arrows)
        for (s, t), m in zip(quiver.arrows, maps):
            assert m.p == p and m.rows == dims[t] and m.cols == dims[s], \
                "arrow matrix shape mismatch"
        object.__setattr__(self, "quiver", quiver)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "maps", maps)
        object.__setattr__(self, "_key", (dims, tuple(m.entries for m in maps)))

    def __setattr__(self, name, value):
        raise AttributeError("Rep is immutable")

    @property
    def key(self):
        return self._key

    @property
    def total_dim(self):
        return sum(self.dims)

    def is_zero(self):
        return self.total_dim == 0

    def __eq__(self, other):
        return (isinstance(other, Rep) and self.quiver == other.quiver
                and self.p == other.p and self._key == other._key)

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Rep(dims={self.dims}, p={self.p})"


def _zero_maps(quiver, p, dims):
    return tuple(FpMatrix.zero(p, dims[t], dims[s]) for s, t in quiver.arrows)


class QuiverBackend:
    """Brute-force backend over a fixed quiver and prime field.

    The isoclass registry assigns ids by full enumeration of each
    dimension vector in a fixed order, so ids within a dimvec are
    reproducible no matter which representation gets classified first.
    """

    def __init__(self, quiver, p):
        assert is_prime(p), "field size must be prime"
        self.quiver = quiver
        self.p = p
        self.q = p
        self._lock = threading.RLock()
        self._classes = []
        self._key_to_id = {}
        self._dimvec_classes = {}
        self._hom = {}
        self._inj = {}
        self._hall = {}
        self._filt = {}
        self._subs = {}
        self._register(self.zero_rep())

    # -- construction -------------------------------------------------

    def zero_rep(self):
        dims = (0,) * self.quiver.n
        return Rep(self.quiver, self.p, dims, _zero_maps(self.quiver, self.p, dims))

    def simple_rep(self, k):
        dims = self.quiver.simple_class(k)
        return Rep(self.quiver, self.p, dims, _zero_maps(self.quiver, self.p, dims))

    def rep(self, dims, maps_entries):
        maps = tuple(
            FpMatrix.from_rows(self.p, rows, cols=dims[s])
            for (s, t), rows in zip(self.quiver.arrows, maps_entries))
        return Rep(self.quiver, self.p, tuple(dims), maps)

    def rep_from_json(self, data):
        """{"dims": {"1":1,"2":1}, "maps": {"0": [[1]]}, "p": 2}"""
        if int(data.get("p", self.p)) != self.p:
            raise ValueError("rep file prime differs from backend prime")
        dims = tuple(int(data["dims"][v]) for v in self.quiver.vertices)
        raw = data.get("maps", {})
        maps = []
        for a, (s, t) in enumerate(self.quiver.arrows):
            rows = raw.get(str(a))
            if rows is None:
                maps.append(FpMatrix.zero(self.p, dims[t], dims[s]))
            else:
                maps.append(FpMatrix(self.p, dims[t], dims[s], rows))
        return Rep(self.quiver, self.p, dims, tuple(maps))

    def load_rep(self, path):
        with open(path) as fh:
            return self.rep_from_json(json.load(fh))

    def direct_sum(self, a, b):
        dims = tuple(x + y for x, y in zip(a.dims, b.dims))
        maps = []
        for idx, (s, t) in enumerate(self.quiver.arrows):
            ma, mb = a.maps[idx], b.maps[idx]
            rows = []
            for r in ma.entries:
                rows.append(tuple(r) + (0,) * mb.cols)
            for r in mb.entries:
                rows.append((0,) * ma.cols + tuple(r))
            maps.append(FpMatrix.from_rows(self.p, rows, cols=dims[s]))
        return Rep(self.quiver, self.p, dims, tuple(maps))

    # -- registry -----------------------------------------------------

    def _register(self, rep):
        cid = len(self._classes)
        self._classes.append(rep)
        self._key_to_id[rep.key] = cid
        return cid

    def iso_classes(self, dimvec):
        """All isoclass ids of the given dimension vector, fixed order."""
        dimvec = tuple(int(d) for d in dimvec)
        with self._lock:
            got = self._dimvec_classes.get(dimvec)
            if got is not None:
                return list(got)
            quiver = self.quiver
            slots = [(dimvec[t] * dimvec[s]) for s, t in quiver.arrows]
            total = sum(slots)
            budget = Budget("iso_classes")
            budget.check_upfront(self.p ** total)
            found = []
            for assign in itertools.product(range(self.p), repeat=total):
                budget.spend()
                maps = []
                pos = 0
                for (s, t), n_ent in zip(quiver.arrows, slots):
                    chunk = assign[pos:pos + n_ent]
                    pos += n_ent
                    rows = [chunk[r * dimvec[s]:(r + 1) * dimvec[s]]
                            for r in range(dimvec[t])]
                    maps.append(FpMatrix(self.p, dimvec[t], dimvec[s], rows))
                cand = Rep(quiver, self.p, dimvec, tuple(maps))
                if not any(self.is_iso(cand, self._classes[cid]) for cid in found):
                    cid = self._key_to_id.get(cand.key)
                    if cid is None:
                        cid = self._register(cand)
                    found.append(cid)
            self._dimvec_classes[dimvec] = found
            return list(found)

    def classify(self, rep):
        """IsoClassId of rep; same input class always gets the same id."""
        if isinstance(rep, int):
            return rep
        with self._lock:
            cid = self._key_to_id.get(rep.key)
            if cid is not None:
                return cid
            for candidate in self.iso_classes(rep.dims):
                if self.is_iso(rep, self._classes[candidate]):
                    self._key_to_id[rep.key] = candidate
                    return candidate
            raise AssertionError("enumeration missed a class")  # unreachable

    def class_rep(self, cid):
        with self._lock:
            return self._classes[cid]

    def class_dim(self, cid):
        return self.class_rep(cid).dims

    def classes_within(self, dimvec):
        """Ids of all classes with dimvec componentwise at most the bound,
        in lexicographic dimvec order."""
        ranges = [range(d + 1) for d in dimvec]
        out = []
        for d in itertools.product(*ranges):
            out.extend(self.iso_classes(d))
        return out

    def class_name(self, cid):
        """S<k> for simples, otherwise X{d1,..,dn}#j in enumeration order."""
        dims = self.class_dim(cid)
        if sum(dims) == 1:
            return f"S{dims.index(1) + 1}"
        j = self.iso_classes(dims).index(cid)
        return "X{" + ",".join(str(d) for d in dims) + "}#" + str(j)

    def class_by_name(self, name):
        name = name.strip()
        if name.startswith("S"):
            k = int(name[1:]) - 1
            return self.classify(self.simple_rep(k))
        if name.startswith("X{"):
            body, _, idx = name[2:].partition("}#")
            dims = tuple(int(x) for x in body.split(","))
            ids = self.iso_classes(dims)
            j = int(idx)
            if not 0 <= j < len(ids):
                raise ValueError(f"{name}: only {len(ids)} classes at {dims}")
            return ids[j]
        raise ValueError(f"cannot parse object name {name!r}")

    def class_sort_key(self, cid):
        dims = self.class_dim(cid)
        return (sum(dims), dims, self.iso_classes(dims).index(cid))

    # -- linear algebra -----------------------------------------------

    def _coerce_rep(self, x):
        return self.class_rep(x) if isinstance(x, int) else x

    def euler_form(self, x, y):
        return self.quiver.euler_form(x, y)

    def sym_euler(self, x, y):
        return self.quiver.sym_euler(x, y)

    def _hom_system(self, a, b):
        """Constraint matrix for intertwiners phi: a -> b (phi_t f_a = f_b phi_s)."""
        quiver = self.quiver
        m, n = a.dims, b.dims
        offs = []
        total = 0
        for i in range(quiver.n):
            offs.append(total)
            total += n[i] * m[i]
        rows = []
        for idx, (s, t) in enumerate(quiver.arrows):
            fa, fb = a.maps[idx], b.maps[idx]
            for r in range(n[t]):
                for c in range(m[s]):
                    row = [0] * total
                    # (phi_t fa)[r,c] = sum_j phi_t[r,j] fa[j,c]
                    for j in range(m[t]):
                        row[offs[t] + r * m[t] + j] += fa.entries[j][c]
                    # (fb phi_s)[r,c] = sum_j fb[r,j] phi_s[j,c]
                    for j in range(n[s]):
                        row[offs[s] + j * m[s] + c] -= fb.entries[r][j]
                    rows.append(row)
        return total, rows

    def hom_dim(self, a, b):
        a, b = self._coerce_rep(a), self._coerce_rep(b)
        memo_key = (a.key, b.key)
        with self._lock:
            got = self._hom.get(memo_key)
            if got is not None:
                return got
            total, rows = self._hom_system(a, b)
            if total == 0:
                dim = 0
            elif not rows:
                dim = total
            else:
                dim = total - rank(FpMatrix.from_rows(self.p, rows, cols=total))
            self._hom[memo_key] = dim
            return dim

    def ext_dim(self, a, b):
        a, b = self._coerce_rep(a), self._coerce_rep(b)
        return self.hom_dim(a, b) - self.euler_form(a.dims, b.dims)

    def hom_basis(self, a, b):
        """Basis of the intertwiner space as tuples of per-vertex matrices."""
        a, b = self._coerce_rep(a), self._coerce_rep(b)
        total, rows = self._hom_system(a, b)
        if total == 0:
            return []
        if rows:
            kernel = solve_nullspace(FpMatrix.from_rows(self.p, rows, cols=total))
            vecs = list(kernel.entries)
        else:
            vecs = list(FpMatrix.identity(self.p, total).entries)
        out = []
        m, n = a.dims, b.dims
        for v in vecs:
            mats = []
            pos = 0
            for i in range(self.quiver.n):
                ent = [v[pos + r * m[i]:pos + (r + 1) * m[i]] for r in range(n[i])]
                pos += n[i] * m[i]
                mats.append(FpMatrix(self.p, n[i], m[i], ent))
            out.append(tuple(mats))
        return out

    # -- subobjects ---------------------------------------------------

    def subobject_pairs(self, rep):
        """All (sub, quotient) pairs of subrepresentations, canonical bases."""
        rep = self._coerce_rep(rep)
        with self._lock:
            got = self._subs.get(rep.key)
            if got is not None:
                return got
            quiver = self.quiver
            p = self.p
            budget = Budget("subobjects")
            per_vertex = []
            for d in rep.dims:
                bases = []
                for k in range(d + 1):
                    bases.extend(enumerate_subspaces(d, k, p, budget))
                per_vertex.append(bases)
            pairs = []
            for combo in itertools.product(*per_vertex):
                budget.spend()
                ok = True
                for idx, (s, t) in enumerate(quiver.arrows):
                    f = rep.maps[idx]
                    for row in combo[s].entries:
                        if not in_rowspace(f.apply(row), combo[t]):
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    pairs.append(self._make_sub_quot(rep, combo))
            self._subs[rep.key] = pairs
            return pairs

    def _make_sub_quot(self, rep, combo):
        quiver, p = self.quiver, self.p
        sub_dims = tuple(b.rows for b in combo)
        quot_dims = tuple(d - b.rows for d, b in zip(rep.dims, combo))
        nonpiv = []
        for i, b in enumerate(combo):
            pivots = {next(j for j, x in enumerate(row) if x) for row in b.entries}
            nonpiv.append([c for c in range(rep.dims[i]) if c not in pivots])
        sub_maps, quot_maps = [], []
        for idx, (s, t) in enumerate(quiver.arrows):
            f = rep.maps[idx]
            cols = []
            for row in combo[s].entries:
                cols.append(rowspace_coords(f.apply(row), combo[t]))
            sub_maps.append(FpMatrix(p, sub_dims[t], sub_dims[s],
                                     tuple(zip(*cols)) if cols else ((),) * sub_dims[t]))
            qcols = []
            for c in nonpiv[s]:
                e = tuple(1 if j == c else 0 for j in range(rep.dims[s]))
                red = reduce_against(f.apply(e), combo[t])
                qcols.append(tuple(red[j] for j in nonpiv[t]))
            quot_maps.append(FpMatrix(p, quot_dims[t], quot_dims[s],
                                      tuple(zip(*qcols)) if qcols else ((),) * quot_dims[t]))
        sub = Rep(quiver, p, sub_dims, tuple(sub_maps))
        quot = Rep(quiver, p, quot_dims, tuple(quot_maps))
        return sub, quot

    def subobjects(self, rep):
        return self.subobject_pairs(rep)

    # -- counting -----------------------------------------------------

    def inj_count(self, a, b):
        """Number of injective homomorphisms a -> b, by the quotient sieve:
        #Inj(a,b) = p^hom(a,b) - sum over nonzero subobjects K of a
        of #Inj(a/K, b)."""
        a, b = self._coerce_rep(a), self._coerce_rep(b)
        memo_key = (a.key, b.key)
        with self._lock:
            got = self._inj.get(memo_key)
            if got is not None:
                return got
            if any(x > y for x, y in zip(a.dims, b.dims)):
                self._inj[memo_key] = 0
                return 0
            total = self.p ** self.hom_dim(a, b)
            for sub, quot in self.subobject_pairs(a):
                if sub.is_zero():
                    continue
                # quot has strictly smaller total dim than a, so classifying
                # here cannot re-enter an in-progress iso_classes(a.dims);
                # recursing on the registered representative collapses the
                # memo key space to one key per isoclass.
                total -= self.inj_count(self.class_rep(self.classify(quot)), b)
            self._inj[memo_key] = total
            return total

    def aut_count(self, m):
        m = self._coerce_rep(m)
        return self.inj_count(m, m)

    def is_iso(self, a, b):
        a, b = self._coerce_rep(a), self._coerce_rep(b)
        if a.dims != b.dims:
            return False
        if a.key == b.key:
            return True
        return self.inj_count(a, b) > 0

    def hall_number(self, big, outer, inner):
        """g^L_{MN}: subobjects X of L with X iso to N and L/X iso to M."""
        lid = self.classify(big)
        mid = self.classify(outer)
        nid = self.classify(inner)
        with self._lock:
            got = self._hall.get((lid, mid, nid))
            if got is not None:
                return got
            lrep = self._classes[lid]
            mrep, nrep = self._classes[mid], self._classes[nid]
            if add_class(mrep.dims, nrep.dims) != lrep.dims:
                count = 0
            else:
                count = 0
                for sub, quot in self.subobject_pairs(lrep):
                    if sub.dims == nrep.dims and quot.dims == mrep.dims \
                            and self.is_iso(sub, nrep) and self.is_iso(quot, mrep):
                        count += 1
            self._hall[(lid, mid, nid)] = count
            return count

    def middle_terms(self, outer, inner):
        mid = self.classify(outer)
        nid = self.classify(inner)
        total = add_class(self.class_dim(mid), self.class_dim(nid))
        return [lid for lid in self.iso_classes(total)
                if self.hall_number(lid, mid, nid) > 0]

    def filtration_count(self, big, parts):
        """g^M_{N1..Nt}: filtrations with successive quotients N1, N2, ..."""
        big = self._coerce_rep(big)
        part_ids = tuple(self.classify(x) for x in parts)
        with self._lock:
            memo_key = (big.key, part_ids)
            got = self._filt.get(memo_key)
            if got is not None:
                return got
            if not part_ids:
                count = 1 if big.is_zero() else 0
            else:
                head = self._classes[part_ids[0]]
                count = 0
                for sub, quot in self.subobject_pairs(big):
                    if quot.dims == head.dims and self.is_iso(quot, head):
                        count += self.filtration_count(sub, part_ids[1:])
            self._filt[memo_key] = count
            return count

    # -- enumeration oracles (slow, used by tests at tiny sizes) -------

    def _all_homs(self, a, b, budget=None):
        basis = self.hom_basis(a, b)
        if budget is not None:
            budget.check_upfront(self.p ** len(basis))
        for coeffs in itertools.product(range(self.p), repeat=len(basis)):
            mats = []
            for i in range(self.quiver.n):
                acc = [[0] * a.dims[i] for _ in range(b.dims[i])]
                for c, elt in zip(coeffs, basis):
                    if c:
                        for r, row in enumerate(elt[i].entries):
                            for j, x in enumerate(row):
                                acc[r][j] = (acc[r][j] + c * x) % self.p
                mats.append(FpMatrix(self.p, b.dims[i], a.dims[i], acc))
            yield tuple(mats)

    def aut_count_enum(self, m):
        m = self._coerce_rep(m)
        budget = Budget("aut_count_enum")
        count = 0
        for mats in self._all_homs(m, m, budget):
            if all(rank(mat) == mat.rows for mat in mats):
                count += 1
        return count

    def is_iso_enum(self, a, b):
        a, b = self._coerce_rep(a), self._coerce_rep(b)
        if a.dims != b.dims:
            return False
        budget = Budget("is_iso_enum")
        for mats in self._all_homs(a, b, budget):
            if all(rank(mat) == mat.rows for mat in mats):
                return True
        return False


class A1ClosedFormBackend:
    """Closed-form oracle for the one-vertex quiver: subspace counts are
    Gaussian binomials and a_M is the general linear group order."""

    def __init__(self, p):
        assert is_prime(p)
        self.quiver = preset("a1")
        self.p = p
        self.q = p

    def iso_classes(self, dimvec):
        (d,) = dimvec
        return [d]

    def classify(self, rep):
        if isinstance(rep, int):
            return rep
        return rep.dims[0]

    def class_dim(self, cid):
        return (cid,)

    def euler_form(self, x, y):
        return x[0] * y[0]

    def sym_euler(self, x, y):
        return 2 * x[0] * y[0]

    def hom_dim(self, a, b):
        return self.classify(a) * self.classify(b)

    def aut_count(self, m):
        return gl_order(self.classify(m), self.q)

    def hall_number(self, big, outer, inner):
        l, m, n = self.classify(big), self.classify(outer), self.classify(inner)
        if m + n != l:
            return 0
        return gaussian_binomial(l, n, self.q)

    def is_iso(self, a, b):
        return self.classify(a) == self.classify(b)


def make_backend(quiver, p):
    if isinstance(quiver, str):
        quiver = preset(quiver)
    return QuiverBackend(quiver, p)
