import numpy as np

from ecmod.errors import EmptyPool


class KdTree2D:
    """Balanced 2-d tree over a fixed point array, built by median splits.

    Nodes own contiguous slices of ``order`` (a permutation of point
    indices). An internal node keeps its median point at the middle of its
    slice; the left child covers the slice before it, the right child the
    slice after it. Split axes alternate x, y, x, ... by depth. Ties at the
    median are broken by (split coordinate, x, y, index).

    Args:
        np.ndarray points: ``(L, 2)`` coordinates; the tree never copies or
            reorders them.
        int leaf_size: Largest slice kept as a leaf.
    """

    def __init__(self, points, leaf_size: int = 1):
        self.points = np.asarray(points, dtype=np.float64)
        if self.points.ndim != 2 or len(self.points) == 0:
            raise EmptyPool("cannot build a tree over an empty pool")
        if leaf_size < 1:
            raise ValueError(f"leaf_size must be >= 1, got {leaf_size}")
        self.leaf_size = leaf_size
        n = len(self.points)
        index = np.arange(n)
        xs, ys = self.points[:, 0], self.points[:, 1]
        self._ranks = []
        for keys in ((index, ys, xs), (index, xs, ys)):
            # lexsort sorts by the last key first
            rank = np.empty(n, dtype=np.int64)
            rank[np.lexsort(keys)] = np.arange(n)
            self._ranks.append(rank)
        self.order = index.copy()
        self._lo: list[int] = []
        self._hi: list[int] = []
        self._axis: list[int] = []
        self._left: list[int] = []
        self._right: list[int] = []
        self._box: list[tuple[float, float, float, float]] = []
        self.height = 0
        self.root = self._build(0, n, 0)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def node_count(self) -> int:
        return len(self._lo)

    def _build(self, lo: int, hi: int, depth: int) -> int:
        if lo >= hi:
            return -1
        self.height = max(self.height, depth + 1)
        node = len(self._lo)
        segment = self.order[lo:hi]
        coords = self.points[segment]
        mins, maxs = coords.min(axis=0), coords.max(axis=0)
        self._lo.append(lo)
        self._hi.append(hi)
        self._box.append(
            (float(mins[0]), float(mins[1]), float(maxs[0]), float(maxs[1]))
        )
        self._left.append(-1)
        self._right.append(-1)
        if hi - lo <= self.leaf_size:
            self._axis.append(-1)
            return node
        axis = depth % 2
        self._axis.append(axis)
        mid = (hi - lo) // 2
        ranks = self._ranks[axis][segment]
        self.order[lo:hi] = segment[np.argpartition(ranks, mid)]
        self._left[node] = self._build(lo, lo + mid, depth + 1)
        self._right[node] = self._build(lo + mid + 1, hi, depth + 1)
        return node

    def query_radius(self, center, r: float) -> np.ndarray:
        """Indices of points strictly closer than ``r`` to ``center``."""
        cx, cy = float(center[0]), float(center[1])
        r2 = float(r) * float(r)
        found: list[np.ndarray] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node < 0:
                continue
            xmin, ymin, xmax, ymax = self._box[node]
            gx = max(xmin - cx, 0.0, cx - xmax)
            gy = max(ymin - cy, 0.0, cy - ymax)
            if gx * gx + gy * gy >= r2:
                continue
            lo, hi = self._lo[node], self._hi[node]
            fx = max(cx - xmin, xmax - cx)
            fy = max(cy - ymin, ymax - cy)
            if fx * fx + fy * fy < r2:
                found.append(self.order[lo:hi])
                continue
            if self._axis[node] < 0:
                segment = self.order[lo:hi]
                diff = self.points[segment] - (cx, cy)
                dist2 = diff[:, 0] * diff[:, 0] + diff[:, 1] * diff[:, 1]
                found.append(segment[dist2 < r2])
                continue
            pivot = int(self.order[lo + (hi - lo) // 2])
            px, py = self.points[pivot]
            dx, dy = float(px) - cx, float(py) - cy
            if dx * dx + dy * dy < r2:
                found.append(np.array([pivot]))
            stack.append(self._right[node])
            stack.append(self._left[node])
        if not found:
            return np.empty(0, dtype=np.int64)
        return np.concatenate(found).astype(np.int64)

    def check_partition(self) -> bool:
        """Every left subtree sorts before its median, every right after."""
        for node in range(self.node_count):
            axis = self._axis[node]
            if axis < 0:
                continue
            lo, hi = self._lo[node], self._hi[node]
            mid = lo + (hi - lo) // 2
            ranks = self._ranks[axis]
            pivot_rank = ranks[self.order[mid]]
            if (ranks[self.order[lo:mid]] >= pivot_rank).any():
                return False
            if (ranks[self.order[mid + 1 : hi]] <= pivot_rank).any():
                return False
        return True


def build_tree(pool, leaf_size: int = 1) -> KdTree2D:
    """Tree over a ``CandidatePool`` (or a raw ``(L, 2)`` array)."""
    points = getattr(pool, "points", pool)
    return KdTree2D(points, leaf_size=leaf_size)


def admissible_query(
    tree: KdTree2D, selected, d_min: float, mask
) -> np.ndarray:
    """Indices of ``mask`` at distance >= d_min from every selected point.

    Args:
        tree: Tree over the pool points.
        selected: Non-empty sequence of plane points.
        d_min: Exclusion radius.
        mask: Boolean availability array of length L, or an index array.
    """
    selected = np.asarray(selected, dtype=np.float64).reshape(-1, 2)
    if len(selected) == 0:
        raise ValueError("selected must be non-empty")
    mask = np.asarray(mask)
    if mask.dtype == bool:
        available = mask.copy()
    else:
        available = np.zeros(len(tree), dtype=bool)
        available[mask.astype(np.int64)] = True
    for point in selected:
        available[tree.query_radius(point, d_min)] = False
    return np.flatnonzero(available)


def brute_force_admissible(points, selected, d_min: float, mask) -> np.ndarray:
    """Linear-scan reference for ``admissible_query``."""
    points = np.asarray(points, dtype=np.float64)
    selected = np.asarray(selected, dtype=np.float64).reshape(-1, 2)
    mask = np.asarray(mask)
    if mask.dtype == bool:
        available = mask.copy()
    else:
        available = np.zeros(len(points), dtype=bool)
        available[mask.astype(np.int64)] = True
    r2 = float(d_min) * float(d_min)
    for cx, cy in selected:
        diff = points - (cx, cy)
        dist2 = diff[:, 0] * diff[:, 0] + diff[:, 1] * diff[:, 1]
        available &= ~(dist2 < r2)
    return np.flatnonzero(available)
