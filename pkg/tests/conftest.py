"""Shared parameter builders for the test suite.

The default numbers mirror the simulation setup used throughout: distance-3
links with square-law pathloss (power gain 3^-4 per link), 0.5 W transmit
powers, -60 dBW antenna noise, -30 dBW processing noise, and the saturating
rectifier fitted at q1=1500, q2=0.0022, 24 mW ceiling.
"""

import swipt_mac as sm

H_SQ_IV = 3.0 ** -4.0  # power gain of each user->destination link


def iv_eh():
    return sm.LogisticEh(q1=1500.0, q2=0.0022, p_max_dc=0.024)


def iv_classical(cost, eh=None, **over):
    kv = dict(
        h1_sq=H_SQ_IV,
        h2_sq=H_SQ_IV,
        p1=0.5,
        p2=0.5,
        n=1e-6,
        n_p=1e-3,
        eh=eh or iv_eh(),
        cost=cost,
    )
    kv.update(over)
    return sm.ClassicalParams(**kv)


def iv_coop(h_u, beta, eh=None, **over):
    """Cooperation network on the same destination links; h_u is the
    inter-user amplitude (both directions), beta the common fee slope."""
    kv = dict(
        h1=3.0 ** -2.0,
        h2=3.0 ** -2.0,
        h12=h_u,
        h21=h_u,
        n1=1e-6,
        n2=1e-6,
        n=1e-6,
        n_p=1e-3,
        p_u1_budget=0.5,
        p_u2_budget=0.5,
        eh=eh or iv_eh(),
        cost_dest=sm.ExpCost(beta=beta),
        cost_user1=sm.ExpCost(beta=beta),
        cost_user2=sm.ExpCost(beta=beta),
    )
    kv.update(over)
    return sm.CoopParams(**kv)
