# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Gauss-Seidel kernels for the penalized three-phase system.

Each nodal update solves the scalar equation exactly (the reaction term is
linear in the updated component), sweeping components 1, 2, 3 in turn in
lexicographic node order.  Arithmetic expression trees match the numpy
fallback so both kernels produce bit-identical iterates; the build disables
FP contraction for the same reason.
"""


def gs_sweeps(double[:, ::1] u1, double[:, ::1] u2, double[:, ::1] u3,
              double inv_eps, double inv_hx2, double inv_hy2, int nsweeps):
    """Run nsweeps lexicographic Gauss-Seidel sweeps in place."""
    cdef Py_ssize_t ny = u1.shape[0]
    cdef Py_ssize_t nx = u1.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double den0 = 2.0 * inv_hx2 + 2.0 * inv_hy2
    cdef double p, num, val
    with nogil:
        for k in range(nsweeps):
            for j in range(1, ny - 1):
                for i in range(1, nx - 1):
                    p = inv_eps * ((u2[j, i] * u2[j, i]) * (u3[j, i] * u3[j, i]))
                    num = (u1[j, i - 1] + u1[j, i + 1]) * inv_hx2 \
                        + (u1[j - 1, i] + u1[j + 1, i]) * inv_hy2
                    val = num / (den0 + p)
                    u1[j, i] = val if val > 0.0 else 0.0
            for j in range(1, ny - 1):
                for i in range(1, nx - 1):
                    p = inv_eps * ((u1[j, i] * u1[j, i]) * (u3[j, i] * u3[j, i]))
                    num = (u2[j, i - 1] + u2[j, i + 1]) * inv_hx2 \
                        + (u2[j - 1, i] + u2[j + 1, i]) * inv_hy2
                    val = num / (den0 + p)
                    u2[j, i] = val if val > 0.0 else 0.0
            for j in range(1, ny - 1):
                for i in range(1, nx - 1):
                    p = inv_eps * ((u1[j, i] * u1[j, i]) * (u2[j, i] * u2[j, i]))
                    num = (u3[j, i - 1] + u3[j, i + 1]) * inv_hx2 \
                        + (u3[j - 1, i] + u3[j + 1, i]) * inv_hy2
                    val = num / (den0 + p)
                    u3[j, i] = val if val > 0.0 else 0.0


def gs_sweeps_redblack(double[:, ::1] u1, double[:, ::1] u2, double[:, ::1] u3,
                       double inv_eps, double inv_hx2, double inv_hy2,
                       int nsweeps):
    """Red-black ordered variant; a different iterate path, same fixed point."""
    cdef Py_ssize_t ny = u1.shape[0]
    cdef Py_ssize_t nx = u1.shape[1]
    cdef Py_ssize_t i, j, k, color
    cdef double den0 = 2.0 * inv_hx2 + 2.0 * inv_hy2
    cdef double p, num, val
    with nogil:
        for k in range(nsweeps):
            for color in range(2):
                for j in range(1, ny - 1):
                    for i in range(1 + ((j + 1 + color) & 1), nx - 1, 2):
                        p = inv_eps * ((u2[j, i] * u2[j, i]) * (u3[j, i] * u3[j, i]))
                        num = (u1[j, i - 1] + u1[j, i + 1]) * inv_hx2 \
                            + (u1[j - 1, i] + u1[j + 1, i]) * inv_hy2
                        val = num / (den0 + p)
                        u1[j, i] = val if val > 0.0 else 0.0
            for color in range(2):
                for j in range(1, ny - 1):
                    for i in range(1 + ((j + 1 + color) & 1), nx - 1, 2):
                        p = inv_eps * ((u1[j, i] * u1[j, i]) * (u3[j, i] * u3[j, i]))
                        num = (u2[j, i - 1] + u2[j, i + 1]) * inv_hx2 \
                            + (u2[j - 1, i] + u2[j + 1, i]) * inv_hy2
                        val = num / (den0 + p)
                        u2[j, i] = val if val > 0.0 else 0.0
            for color in range(2):
                for j in range(1, ny - 1):
                    for i in range(1 + ((j + 1 + color) & 1), nx - 1, 2):
                        p = inv_eps * ((u1[j, i] * u1[j, i]) * (u2[j, i] * u2[j, i]))
                        num = (u3[j, i - 1] + u3[j, i + 1]) * inv_hx2 \
                            + (u3[j - 1, i] + u3[j + 1, i]) * inv_hy2
                        val = num / (den0 + p)
                        u3[j, i] = val if val > 0.0 else 0.0


def residual_max(double[:, ::1] u1, double[:, ::1] u2, double[:, ::1] u3,
                 double inv_eps, double inv_hx2, double inv_hy2):
    """Max projected Euler-Lagrange residual over interior nodes/components.

    Where u > 0: |lap(u) - p*u|.  Where u = 0: max(0, lap(u) - p*u), the
    complementarity defect of the projected system (a positive interior
    Laplacian at a pinned-to-zero node is an available descent direction).
    """
    cdef Py_ssize_t ny = u1.shape[0]
    cdef Py_ssize_t nx = u1.shape[1]
    cdef Py_ssize_t i, j
    cdef double best = 0.0
    cdef double p, lap, r, c, v
    with nogil:
        for j in range(1, ny - 1):
            for i in range(1, nx - 1):
                v = u1[j, i]
                p = inv_eps * ((u2[j, i] * u2[j, i]) * (u3[j, i] * u3[j, i]))
                lap = ((u1[j, i - 1] + u1[j, i + 1]) - 2.0 * v) * inv_hx2 \
                    + ((u1[j - 1, i] + u1[j + 1, i]) - 2.0 * v) * inv_hy2
                r = lap - p * v
                if v > 0.0:
                    c = r if r > 0.0 else -r
                else:
                    c = r if r > 0.0 else 0.0
                if c > best:
                    best = c

                v = u2[j, i]
                p = inv_eps * ((u1[j, i] * u1[j, i]) * (u3[j, i] * u3[j, i]))
                lap = ((u2[j, i - 1] + u2[j, i + 1]) - 2.0 * v) * inv_hx2 \
                    + ((u2[j - 1, i] + u2[j + 1, i]) - 2.0 * v) * inv_hy2
                r = lap - p * v
                if v > 0.0:
                    c = r if r > 0.0 else -r
                else:
                    c = r if r > 0.0 else 0.0
                if c > best:
                    best = c

                v = u3[j, i]
                p = inv_eps * ((u1[j, i] * u1[j, i]) * (u2[j, i] * u2[j, i]))
                lap = ((u3[j, i - 1] + u3[j, i + 1]) - 2.0 * v) * inv_hx2 \
                    + ((u3[j - 1, i] + u3[j + 1, i]) - 2.0 * v) * inv_hy2
                r = lap - p * v
                if v > 0.0:
                    c = r if r > 0.0 else -r
                else:
                    c = r if r > 0.0 else 0.0
                if c > best:
                    best = c
    return best
