"""Pure-Python Metropolis chain; bit-for-bit twin of the compiled ``_anneal``."""
import math


def anneal_chain(Q, betas, state, uniforms, best_state, sweep_energy):
    n = Q.shape[0]
    q = Q.tolist()
    bits = [int(v) for v in state]
    u = uniforms.tolist()
    exp = math.exp

    field = []
    for i in range(n):
        acc = 0.0
        row = q[i]
        for j in range(n):
            if bits[j]:
                acc = acc + row[j]
        field.append(acc)
    energy = 0.0
    for i in range(n):
        if bits[i]:
            energy = energy + field[i]
    energy = 0.5 * energy
    best = energy
    best_bits = list(bits)

    for s, beta in enumerate(betas.tolist()):
        us = u[s]
        for i in range(n):
            delta = 1.0 - 2.0 * bits[i]
            row = q[i]
            de = delta * field[i] + 0.5 * row[i]
            if de <= 0.0 or us[i] < exp(-beta * de):
                bits[i] = 1 - bits[i]
                for j in range(n):
                    field[j] = field[j] + delta * row[j]
                energy = energy + de
                if energy < best:
                    best = energy
                    best_bits = list(bits)
        sweep_energy[s] = energy

    state[:] = bits
    best_state[:] = best_bits
    return best
