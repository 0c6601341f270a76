# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops of the simulator.

Each function here has a pure Python twin in ``pherofly._kernels_py`` and
both must produce bit-identical results: all randomness is pre-drawn by
the caller and consumed in a documented order, and the scalar math goes
through libm in both implementations.
"""

from libc.math cimport exp, floor, pow, sqrt

cdef double INF = float("inf")


def evaporate(double[:, ::1] levels, double rho):
    """Scale the whole field by (1 - rho) in place."""
    cdef Py_ssize_t i, j
    cdef double keep = 1.0 - rho
    for i in range(levels.shape[0]):
        for j in range(levels.shape[1]):
            levels[i, j] *= keep


def deposit_disk(double[:, ::1] levels, int x0, int y0,
                 double delta_tau0, double a1, double a2, double r_s,
                 double[::1] eps):
    """Add one robot's deposit around (x0, y0), 1-based, in place.

    ``eps`` holds one uniform draw per cell of the bounding box
    ``[x0 - floor(r_s) .. x0 + floor(r_s)] x [y0 - floor(r_s) .. y0 + floor(r_s)]``
    clipped to the grid, in row-major order (y outer, x inner). Draws for
    cells outside the Euclidean radius are consumed but unused, so the
    draw count depends only on the clipped box. Each increment is
    ``delta_tau0 * exp(-r / a1) - eps / a2`` clamped at zero. Returns the
    total amount added.
    """
    cdef Py_ssize_t n = levels.shape[0]
    cdef Py_ssize_t m = levels.shape[1]
    cdef int ext = <int>floor(r_s)
    cdef int xlo = x0 - ext
    cdef int xhi = x0 + ext
    cdef int ylo = y0 - ext
    cdef int yhi = y0 + ext
    if xlo < 1:
        xlo = 1
    if xhi > m:
        xhi = <int>m
    if ylo < 1:
        ylo = 1
    if yhi > n:
        yhi = <int>n
    cdef double total = 0.0
    cdef double dx, dy, r, d
    cdef Py_ssize_t k = 0
    cdef int x, y
    for y in range(ylo, yhi + 1):
        for x in range(xlo, xhi + 1):
            dx = x - x0
            dy = y - y0
            r = sqrt(dx * dx + dy * dy)
            if r <= r_s:
                d = delta_tau0 * exp(-r / a1) - eps[k] / a2
                if d > 0.0:
                    levels[y - 1, x - 1] += d
                    total += d
            k += 1
    return total


def transition_scores(double[::1] tau, double[::1] u,
                      double phi, double lam, double eta_base,
                      double tau_floor, double[::1] out):
    """Score each movement option and return the index of the smallest.

    score_i = (tau_i + tau_floor)^phi * (eta_base^u_i)^lam. The caller
    resolves exact ties among equal minima; this returns the first one.
    """
    cdef Py_ssize_t i, best = 0
    cdef double s
    cdef double best_s = INF
    for i in range(tau.shape[0]):
        s = pow(tau[i] + tau_floor, phi) * pow(pow(eta_base, u[i]), lam)
        out[i] = s
        if s < best_s:
            best_s = s
            best = i
    return best


# Offsets of the 8-neighbourhood in the canonical scan order (row above,
# same row, row below). Must match pherofly.world._OFFSETS.
cdef int[8] _OFF_X = [-1, 0, 1, -1, 1, -1, 0, 1]
cdef int[8] _OFF_Y = [-1, -1, -1, 0, 0, 1, 1, 1]


def open_options(const unsigned char[::1] state, const unsigned char[::1] occ,
                 double[:, ::1] levels, int m, int n, int x, int y,
                 int[::1] out_x, int[::1] out_y, double[::1] out_tau):
    """Collect the open neighbours of (x, y) and their pheromone levels.

    A neighbour is open when it is inside the grid, its cell state sorts
    below the obstacle states (state < 2) and no robot occupies it. The
    coordinates and levels land in the out buffers (size >= 8); returns
    the option count.
    """
    cdef Py_ssize_t k, count = 0
    cdef int nx, ny
    for k in range(8):
        nx = x + _OFF_X[k]
        ny = y + _OFF_Y[k]
        if 1 <= nx <= m and 1 <= ny <= n:
            if state[(ny - 1) * m + (nx - 1)] < 2 and occ[(ny - 1) * m + (nx - 1)] == 0:
                out_x[count] = nx
                out_y[count] = ny
                out_tau[count] = levels[ny - 1, nx - 1]
                count += 1
    return count


def pick_min_score(double[::1] tau, double[::1] u,
                   double phi, double lam, double eta_base,
                   double tau_floor, double[::1] out):
    """Like transition_scores, but also count exact ties for the minimum.

    Loops over ``u`` (one draw per option), so ``tau`` and ``out`` may be
    longer scratch buffers. Returns ``(first_min_index, tie_count)``.
    """
    cdef Py_ssize_t i, best = 0, ties = 0
    cdef double s
    cdef double best_s = INF
    for i in range(u.shape[0]):
        s = pow(tau[i] + tau_floor, phi) * pow(pow(eta_base, u[i]), lam)
        out[i] = s
        if s < best_s:
            best_s = s
            best = i
            ties = 1
        elif s == best_s:
            ties += 1
    return best, ties


def urge_minmax(const unsigned char[::1] state, const unsigned char[::1] occ,
                double[:, ::1] levels, int m, int n, int x, int y):
    """Min and max pheromone level over the open neighbours of (x, y).

    Returns ``(min, max)``, or ``(0.0, 0.0)`` when the robot is boxed in.
    """
    cdef Py_ssize_t k
    cdef int nx, ny
    cdef double v
    cdef double mn = INF
    cdef double mx = -INF
    cdef bint found = False
    for k in range(8):
        nx = x + _OFF_X[k]
        ny = y + _OFF_Y[k]
        if 1 <= nx <= m and 1 <= ny <= n:
            if state[(ny - 1) * m + (nx - 1)] < 2 and occ[(ny - 1) * m + (nx - 1)] == 0:
                v = levels[ny - 1, nx - 1]
                if not found:
                    mn = v
                    mx = v
                    found = True
                else:
                    if v < mn:
                        mn = v
                    if v > mx:
                        mx = v
    if not found:
        return 0.0, 0.0
    return mn, mx
