"""Pure Python twins of the compiled kernels.

Kept bit-identical to ``pherofly._kernels``: same pre-drawn noise
consumption order, and scalar math through :mod:`math` (libm) rather than
numpy ufuncs, which may round differently.
"""

import math


def evaporate(levels, rho):
    levels *= 1.0 - rho


def deposit_disk(levels, x0, y0, delta_tau0, a1, a2, r_s, eps):
    # Same bounding-box and draw-order convention as the compiled version.
    n, m = levels.shape
    ext = math.floor(r_s)
    xlo = max(1, x0 - ext)
    xhi = min(m, x0 + ext)
    ylo = max(1, y0 - ext)
    yhi = min(n, y0 + ext)
    total = 0.0
    k = 0
    for y in range(ylo, yhi + 1):
        for x in range(xlo, xhi + 1):
            dx = x - x0
            dy = y - y0
            r = math.sqrt(dx * dx + dy * dy)
            if r <= r_s:
                # float() keeps the running sum a plain float even though
                # eps is a numpy array; the compiled twin returns a C double.
                d = delta_tau0 * math.exp(-r / a1) - float(eps[k]) / a2
                if d > 0.0:
                    levels[y - 1, x - 1] += d
                    total += d
            k += 1
    return total


def transition_scores(tau, u, phi, lam, eta_base, tau_floor, out):
    best = 0
    best_s = math.inf
    for i in range(len(tau)):
        s = math.pow(tau[i] + tau_floor, phi) * math.pow(math.pow(eta_base, u[i]), lam)
        out[i] = s
        if s < best_s:
            best_s = s
            best = i
    return best


# Must match pherofly.world._OFFSETS.
_OFFSETS = ((-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1))


def open_options(state, occ, levels, m, n, x, y, out_x, out_y, out_tau):
    count = 0
    for dx, dy in _OFFSETS:
        nx = x + dx
        ny = y + dy
        if 1 <= nx <= m and 1 <= ny <= n:
            idx = (ny - 1) * m + (nx - 1)
            if state[idx] < 2 and occ[idx] == 0:
                out_x[count] = nx
                out_y[count] = ny
                out_tau[count] = levels[ny - 1, nx - 1]
                count += 1
    return count


def pick_min_score(tau, u, phi, lam, eta_base, tau_floor, out):
    best = 0
    ties = 0
    best_s = math.inf
    for i in range(len(u)):
        s = math.pow(tau[i] + tau_floor, phi) * math.pow(math.pow(eta_base, u[i]), lam)
        out[i] = s
        if s < best_s:
            best_s = s
            best = i
            ties = 1
        elif s == best_s:
            ties += 1
    return best, ties


def urge_minmax(state, occ, levels, m, n, x, y):
    mn = math.inf
    mx = -math.inf
    found = False
    for dx, dy in _OFFSETS:
        nx = x + dx
        ny = y + dy
        if 1 <= nx <= m and 1 <= ny <= n:
            idx = (ny - 1) * m + (nx - 1)
            if state[idx] < 2 and occ[idx] == 0:
                v = float(levels[ny - 1, nx - 1])
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
