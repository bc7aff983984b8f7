"""Independent brute-force oracles shared between test modules."""

import numpy as np
from scipy import ndimage


def _both_sign_change(c1, c2, ulo, uhi, vlo, vhi, n):
    u = np.linspace(ulo, uhi, n)
    v = np.linspace(vlo, vhi, n)
    U, V = np.meshgrid(u, v, indexing="ij")

    def q(c):
        return (c.A * U**2 + c.B * V**2 + c.C * U + c.D * V
                + c.E * U * V + c.F0)

    def sign_change(vals):
        s = np.sign(vals)
        cell = np.zeros((n - 1, n - 1), dtype=bool)
        corners = [(0, 0), (0, 1), (1, 0), (1, 1)]
        for da, db in corners:
            for ea, eb in corners:
                cell |= (s[da:n - 1 + da, db:n - 1 + db]
                         * s[ea:n - 1 + ea, eb:n - 1 + eb]) < 0
        return cell

    return sign_change(q(c1)) & sign_change(q(c2)), u, v


def _scan_once(c1, c2, lo, hi, n):
    both, u, v = _both_sign_change(c1, c2, lo, hi, lo, hi, n)
    # dilation merges cell groups split across a shallow crossing
    merged = ndimage.binary_dilation(both, np.ones((5, 5), dtype=bool))
    labels, nlab = ndimage.label(merged, structure=np.ones((3, 3)))
    boxes = ndimage.find_objects(labels)
    compact = all(max(b[0].stop - b[0].start, b[1].stop - b[1].start) <= 24
                  for b in boxes)
    verified = 0
    for box in boxes:
        # near-miss clusters (curves closer than a cell without
        # touching) evaporate under local refinement
        pad = 4 * (u[1] - u[0])
        ulo, uhi = u[box[0].start] - pad, u[min(box[0].stop, n - 1)] + pad
        vlo, vhi = v[box[1].start] - pad, v[min(box[1].stop, n - 1)] + pad
        local, _, _ = _both_sign_change(c1, c2, ulo, uhi, vlo, vhi, 400)
        if local.any():
            verified += 1
    return verified, compact


def grid_scan_count(c1, c2, lo=-3.0, hi=3.0, n=2000):
    """Brute-force intersection count by sign-change cells.

    Counts connected clusters of grid cells in which both conics change
    sign; each cluster is re-scanned in a locally refined window.  The
    count is computed at resolution n and n//2.  Returns (count,
    certified); elongated clusters or refinement-unstable counts make
    the oracle abstain (certified=False).
    """
    count_f, compact_f = _scan_once(c1, c2, lo, hi, n)
    count_c, compact_c = _scan_once(c1, c2, lo, hi, n // 2)
    certified = compact_f and compact_c and count_f == count_c
    return count_f, certified
