# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled weighbridge backend.

Operation-for-operation mirror of the pure-Python backend: the same events
fire in the same (time, insertion) order and every random draw is taken from
the same numpy bit-generator streams through numpy's C interface, so the two
backends return bit-identical tallies for identical stream states.
"""

from libc.math cimport fmod
from libc.stdlib cimport free, malloc, realloc

from cpython.pycapsule cimport PyCapsule_GetPointer
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (
    random_normal,
    random_standard_exponential,
)

cdef const char *CAPSULE_NAME = "BitGenerator"

DEF LORRY = 0
DEF NON_LORRY = 1
DEF EV_ARRIVAL = 0
DEF EV_DECISION = 1
DEF EV_SERVICE_END = 2
DEF EV_MERGE_DONE = 3


cdef struct Event:
    double time
    long seq
    int kind
    int grp
    double svc
    double t_arr
    int flags


cdef struct Heap:
    Event *items
    int size
    int cap


cdef inline bint ev_lt(Event *a, Event *b) noexcept:
    if a.time != b.time:
        return a.time < b.time
    return a.seq < b.seq


cdef int heap_push(Heap *h, Event ev) except -1:
    cdef int i, parent
    cdef Event tmp
    if h.size == h.cap:
        h.cap *= 2
        h.items = <Event *> realloc(h.items, h.cap * sizeof(Event))
        if h.items == NULL:
            raise MemoryError()
    h.items[h.size] = ev
    i = h.size
    h.size += 1
    while i > 0:
        parent = (i - 1) >> 1
        if ev_lt(&h.items[i], &h.items[parent]):
            tmp = h.items[i]
            h.items[i] = h.items[parent]
            h.items[parent] = tmp
            i = parent
        else:
            break
    return 0


cdef Event heap_pop(Heap *h) noexcept:
    cdef Event top = h.items[0]
    cdef Event tmp
    cdef int i = 0, child
    h.size -= 1
    h.items[0] = h.items[h.size]
    while True:
        child = 2 * i + 1
        if child >= h.size:
            break
        if child + 1 < h.size and ev_lt(&h.items[child + 1], &h.items[child]):
            child += 1
        if ev_lt(&h.items[child], &h.items[i]):
            tmp = h.items[i]
            h.items[i] = h.items[child]
            h.items[child] = tmp
            i = child
        else:
            break
    return top


cdef struct Ring:
    # FIFO ring buffer of (join_seq, service time) pairs
    long *seqs
    double *svcs
    int head
    int size
    int cap


cdef int ring_init(Ring *r, int cap) except -1:
    r.cap = cap
    r.head = 0
    r.size = 0
    r.seqs = <long *> malloc(cap * sizeof(long))
    r.svcs = <double *> malloc(cap * sizeof(double))
    if r.seqs == NULL or r.svcs == NULL:
        raise MemoryError()
    return 0


cdef int ring_push(Ring *r, long seq, double svc) except -1:
    cdef long *ns
    cdef double *nv
    cdef int i, j
    if r.size == r.cap:
        ns = <long *> malloc(2 * r.cap * sizeof(long))
        nv = <double *> malloc(2 * r.cap * sizeof(double))
        if ns == NULL or nv == NULL:
            raise MemoryError()
        for i in range(r.size):
            j = (r.head + i) % r.cap
            ns[i] = r.seqs[j]
            nv[i] = r.svcs[j]
        free(r.seqs)
        free(r.svcs)
        r.seqs = ns
        r.svcs = nv
        r.head = 0
        r.cap *= 2
    cdef int tail = (r.head + r.size) % r.cap
    r.seqs[tail] = seq
    r.svcs[tail] = svc
    r.size += 1
    return 0


cdef inline double ring_pop(Ring *r) noexcept:
    cdef double svc = r.svcs[r.head]
    r.head = (r.head + 1) % r.cap
    r.size -= 1
    return svc


cdef inline double draw_delay(int kind, double a, double b, bitgen_t *rng) noexcept nogil:
    cdef double x
    if kind == 0:
        return a
    if kind == 1:
        return a + (b - a) * rng.next_double(rng.state)
    if kind == 2:
        x = random_normal(rng, a, b)
        while x <= 0.0:
            x = random_normal(rng, a, b)
        return x
    return a * random_standard_exponential(rng)


cdef inline bint gate_open(int grp, bint total_gate, Ring *waiting,
                           int *qcap, int qcap_total, int advance) noexcept:
    if total_gate:
        return waiting[0].size + waiting[1].size <= qcap_total - advance
    return waiting[grp].size <= qcap[grp] - advance


cdef inline bint group_closed(int grp, Ring *waiting, int *qcap, int advance) noexcept:
    # per-group saturation, used for blame attribution in either gate mode
    return waiting[grp].size > qcap[grp] - advance


cdef bitgen_t *get_bitgen(object bit_generator):
    return <bitgen_t *> PyCapsule_GetPointer(bit_generator.capsule, CAPSULE_NAME)


def run_replication(dict params, dict bit_generators):
    """Simulate one replication; returns the raw tally tuple.

    ``bit_generators`` maps stream purposes to numpy BitGenerator objects in
    the same states the pure backend would consume.
    """
    cdef bitgen_t *rng_arrival = get_bitgen(bit_generators["arrival"])
    cdef bitgen_t *rng_type = get_bitgen(bit_generators["vehicle_type"])
    cdef bitgen_t *rng_temper = get_bitgen(bit_generators["temperament"])
    cdef bitgen_t *rng_company = get_bitgen(bit_generators["company"])
    cdef bitgen_t *rng_svc[2]
    rng_svc[LORRY] = get_bitgen(bit_generators["service_lorry"])
    rng_svc[NON_LORRY] = get_bitgen(bit_generators["service_non_lorry"])
    cdef bitgen_t *rng_travel = get_bitgen(bit_generators["travel"])
    cdef bitgen_t *rng_merge = get_bitgen(bit_generators["merge"])

    cdef double rate = params["rate_per_sec"]
    cdef double peak_p = params["peak_p"]
    cdef double off_peak_p = params["off_peak_p"]
    cdef double peak_start = params["peak_start_sec"]
    cdef double peak_end = params["peak_end_sec"]
    cdef double svc_mean[2]
    cdef double svc_sd[2]
    svc_mean[LORRY] = params["lorry_mean"]
    svc_sd[LORRY] = params["lorry_sd"]
    svc_mean[NON_LORRY] = params["non_lorry_mean"]
    svc_sd[NON_LORRY] = params["non_lorry_sd"]
    cdef double bad_temper_p = params["bad_temper_p"]
    cdef double alone_p = params["alone_p"]
    cdef int lanes[2]
    lanes[LORRY] = params["lorry_lanes"]
    lanes[NON_LORRY] = params["non_lorry_lanes"]
    cdef int qcap[2]
    qcap[LORRY] = params["lorry_qcap"]
    qcap[NON_LORRY] = params["non_lorry_qcap"]
    cdef int qcap_total = qcap[0] + qcap[1]
    cdef int advance = params["advance_free"]
    cdef int merge_cap = params["merge_capacity"]
    cdef int travel_kind = params["travel_kind"]
    cdef double travel_a = params["travel_a"]
    cdef double travel_b = params["travel_b"]
    cdef int merge_kind = params["merge_kind"]
    cdef double merge_a = params["merge_a"]
    cdef double merge_b = params["merge_b"]
    cdef double end = params["end_time"]
    cdef double warm = params["warmup_time"]
    cdef bint poisson = params["poisson_arrivals"]
    cdef bint bernoulli = params["bernoulli_mix"]
    cdef bint total_gate = params["total_gate"]

    cdef Heap heap
    heap.cap = 256
    heap.size = 0
    heap.items = <Event *> malloc(heap.cap * sizeof(Event))
    if heap.items == NULL:
        raise MemoryError()
    cdef long next_seq = 0

    cdef Ring channels[2]
    cdef Ring waiting[2]
    cdef int g
    channels[0].seqs = NULL
    channels[0].svcs = NULL
    channels[1].seqs = NULL
    channels[1].svcs = NULL
    waiting[0].seqs = NULL
    waiting[0].svcs = NULL
    waiting[1].seqs = NULL
    waiting[1].svcs = NULL

    # merge_wait holds at most one entry per weigher
    cdef int mw_cap = lanes[0] + lanes[1] + 2
    cdef int *merge_wait = <int *> malloc(mw_cap * sizeof(int))
    cdef int mw_head = 0, mw_size = 0

    cdef int busy[2]
    busy[0] = 0
    busy[1] = 0
    cdef int merge_used = 0
    cdef double quota_err = 0.0
    cdef long join_seq = 0

    cdef long n = 0, n_queued = 0, n_passive = 0, dissat_sum = 0
    cdef long arrivals_total = 0, decisions_done = 0
    cdef int peak_backlog = 0, leftover = 0
    cdef bint arrivals_finished = False

    cdef Event ev
    cdef double t, hour_sec, share, svc, travel, nxt, first, delay
    cdef int backlog, queue_kind, flags, ti, ai
    cdef bint jam, own_open, temper, alone, counted

    try:
        if merge_wait == NULL:
            raise MemoryError()
        for g in range(2):
            ring_init(&channels[g], 1024)
            ring_init(&waiting[g], qcap_total + 4)

        if poisson:
            first = random_standard_exponential(rng_arrival) / rate
        else:
            first = 1.0 / rate
        if first <= end:
            ev.time = first
            ev.seq = next_seq
            next_seq += 1
            ev.kind = EV_ARRIVAL
            ev.grp = 0
            ev.svc = 0.0
            ev.t_arr = 0.0
            ev.flags = 0
            heap_push(&heap, ev)
        else:
            arrivals_finished = True

        while heap.size > 0:
            ev = heap_pop(&heap)
            t = ev.time

            if ev.kind == EV_ARRIVAL:
                arrivals_total += 1
                hour_sec = fmod(t, 86400.0)
                if peak_start <= hour_sec < peak_end:
                    share = peak_p
                else:
                    share = off_peak_p
                if bernoulli:
                    g = LORRY if rng_type.next_double(rng_type.state) < share else NON_LORRY
                else:
                    quota_err += share
                    if quota_err >= 1.0:
                        g = LORRY
                        quota_err -= 1.0
                    else:
                        g = NON_LORRY
                temper = rng_temper.next_double(rng_temper.state) < bad_temper_p
                alone = rng_company.next_double(rng_company.state) < alone_p
                svc = random_normal(rng_svc[g], svc_mean[g], svc_sd[g])
                while svc <= 0.0:
                    svc = random_normal(rng_svc[g], svc_mean[g], svc_sd[g])
                travel = draw_delay(travel_kind, travel_a, travel_b, rng_travel)
                ev.time = t + travel
                ev.seq = next_seq
                next_seq += 1
                ev.kind = EV_DECISION
                ev.grp = g
                ev.svc = svc
                ev.t_arr = t
                ev.flags = (1 if temper else 0) | (2 if alone else 0)
                heap_push(&heap, ev)
                if poisson:
                    nxt = t + random_standard_exponential(rng_arrival) / rate
                else:
                    nxt = t + 1.0 / rate
                if nxt <= end:
                    ev.time = nxt
                    ev.seq = next_seq
                    next_seq += 1
                    ev.kind = EV_ARRIVAL
                    ev.grp = 0
                    ev.svc = 0.0
                    ev.t_arr = 0.0
                    ev.flags = 0
                    heap_push(&heap, ev)
                else:
                    arrivals_finished = True

            elif ev.kind == EV_DECISION:
                g = ev.grp
                svc = ev.svc
                flags = ev.flags
                temper = (flags & 1) != 0
                alone = (flags & 2) != 0
                counted = ev.t_arr >= warm
                jam = channels[0].size > 0 or channels[1].size > 0
                own_open = gate_open(g, total_gate, &waiting[0], &qcap[0], qcap_total, advance)
                if jam or not own_open:
                    if (group_closed(1 - g, &waiting[0], &qcap[0], advance)
                            and not group_closed(g, &waiting[0], &qcap[0], advance)):
                        queue_kind = 2
                    else:
                        queue_kind = 1
                    ring_push(&channels[g], join_seq, svc)
                    join_seq += 1
                    backlog = channels[0].size + channels[1].size
                    if backlog > peak_backlog:
                        peak_backlog = backlog
                else:
                    queue_kind = 0
                    if busy[g] < lanes[g]:
                        busy[g] += 1
                        ev.time = t + svc
                        ev.seq = next_seq
                        next_seq += 1
                        ev.kind = EV_SERVICE_END
                        ev.grp = g
                        heap_push(&heap, ev)
                    else:
                        ring_push(&waiting[g], 0, svc)
                if counted:
                    n += 1
                    if queue_kind > 0:
                        n_queued += 1
                        if queue_kind == 2:
                            n_passive += 1
                    # linear form of the dissatisfaction table: base 20 (50 if
                    # passive) plus 30 for travelling alone, 20 for bad temper
                    ti = 1 if temper else 0
                    ai = 1 if alone else 0
                    if queue_kind == 1:
                        dissat_sum += 20 + 30 * ai + 20 * ti
                    elif queue_kind == 2:
                        dissat_sum += 50 + 30 * ai + 20 * ti
                decisions_done += 1
                if arrivals_finished and decisions_done == arrivals_total:
                    leftover = channels[0].size + channels[1].size
                    break

            else:
                if ev.kind == EV_SERVICE_END:
                    g = ev.grp
                    if merge_used >= merge_cap:
                        merge_wait[(mw_head + mw_size) % mw_cap] = g
                        mw_size += 1
                        continue
                else:  # EV_MERGE_DONE
                    merge_used -= 1
                    if mw_size == 0:
                        continue
                    g = merge_wait[mw_head]
                    mw_head = (mw_head + 1) % mw_cap
                    mw_size -= 1
                # enter merge: free the weigher, pull the lane queue, release
                merge_used += 1
                busy[g] -= 1
                delay = draw_delay(merge_kind, merge_a, merge_b, rng_merge)
                ev.time = t + delay
                ev.seq = next_seq
                next_seq += 1
                ev.kind = EV_MERGE_DONE
                ev.grp = 0
                heap_push(&heap, ev)
                if waiting[g].size > 0:
                    svc = ring_pop(&waiting[g])
                    busy[g] += 1
                    ev.time = t + svc
                    ev.seq = next_seq
                    next_seq += 1
                    ev.kind = EV_SERVICE_END
                    ev.grp = g
                    heap_push(&heap, ev)
                # release the approach channels while gates allow
                if total_gate:
                    while ((channels[0].size > 0 or channels[1].size > 0)
                           and gate_open(0, total_gate, &waiting[0], &qcap[0], qcap_total, advance)):
                        if channels[0].size > 0 and channels[1].size > 0:
                            g = 0 if channels[0].seqs[channels[0].head] < channels[1].seqs[channels[1].head] else 1
                        elif channels[0].size > 0:
                            g = 0
                        else:
                            g = 1
                        svc = ring_pop(&channels[g])
                        if busy[g] < lanes[g]:
                            busy[g] += 1
                            ev.time = t + svc
                            ev.seq = next_seq
                            next_seq += 1
                            ev.kind = EV_SERVICE_END
                            ev.grp = g
                            heap_push(&heap, ev)
                        else:
                            ring_push(&waiting[g], 0, svc)
                else:
                    for g in range(2):
                        while (channels[g].size > 0
                               and gate_open(g, total_gate, &waiting[0], &qcap[0], qcap_total, advance)):
                            svc = ring_pop(&channels[g])
                            if busy[g] < lanes[g]:
                                busy[g] += 1
                                ev.time = t + svc
                                ev.seq = next_seq
                                next_seq += 1
                                ev.kind = EV_SERVICE_END
                                ev.grp = g
                                heap_push(&heap, ev)
                            else:
                                ring_push(&waiting[g], 0, svc)
    finally:
        free(heap.items)
        free(merge_wait)
        for g in range(2):
            free(channels[g].seqs)
            free(channels[g].svcs)
            free(waiting[g].seqs)
            free(waiting[g].svcs)

    return (n, n_queued, n_passive, dissat_sum, peak_backlog, leftover)
