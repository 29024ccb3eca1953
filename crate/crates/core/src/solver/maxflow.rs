//! Edmonds–Karp max-flow on the bipartite network
//! source → supply i → demand j → sink.

use std::collections::VecDeque;

use super::scalar::Scalar;

/// Returns the routed value and the row-major `nx * ny` arc flows.
pub(crate) fn bipartite_max_flow<T: Scalar>(supply: &[T], demand: &[T], cap: &[T]) -> (T, Vec<T>) {
    let nx = supply.len();
    let ny = demand.len();
    let mut flow = vec![T::zero(); nx * ny];
    let mut sent = vec![T::zero(); nx];
    let mut received = vec![T::zero(); ny];
    let mut value = T::zero();

    // Node ids: supply i -> i, demand j -> nx + j.
    #[derive(Clone, Copy)]
    enum Via {
        Source,
        Arc { from: usize, forward: bool },
    }

    loop {
        let mut via: Vec<Option<Via>> = vec![None; nx + ny];
        let mut queue = VecDeque::new();
        for i in 0..nx {
            if sent[i].lt(&supply[i]) {
                via[i] = Some(Via::Source);
                queue.push_back(i);
            }
        }
        let mut sink_from = None;
        while let Some(v) = queue.pop_front() {
            if v < nx {
                for j in 0..ny {
                    let w = nx + j;
                    if via[w].is_none() && flow[v * ny + j].lt(&cap[v * ny + j]) {
                        via[w] = Some(Via::Arc {
                            from: v,
                            forward: true,
                        });
                        queue.push_back(w);
                    }
                }
            } else {
                let j = v - nx;
                if received[j].lt(&demand[j]) {
                    sink_from = Some(j);
                    break;
                }
                for i in 0..nx {
                    if via[i].is_none() && flow[i * ny + j].is_positive() {
                        via[i] = Some(Via::Arc {
                            from: v,
                            forward: false,
                        });
                        queue.push_back(i);
                    }
                }
            }
        }
        let Some(last) = sink_from else {
            return (value, flow);
        };

        // Bottleneck along the path, walking back from the sink.
        let mut delta = demand[last].sub(&received[last]);
        let mut v = nx + last;
        loop {
            match via[v].expect("path node") {
                Via::Source => {
                    delta = delta.min_of(&supply[v].sub(&sent[v]));
                    break;
                }
                Via::Arc { from, forward } => {
                    let k = if forward {
                        from * ny + (v - nx)
                    } else {
                        v * ny + (from - nx)
                    };
                    let r = if forward {
                        cap[k].sub(&flow[k])
                    } else {
                        flow[k].clone()
                    };
                    delta = delta.min_of(&r);
                    v = from;
                }
            }
        }

        received[last] = received[last].add(&delta);
        let mut v = nx + last;
        loop {
            match via[v].expect("path node") {
                Via::Source => {
                    sent[v] = sent[v].add(&delta);
                    break;
                }
                Via::Arc { from, forward } => {
                    if forward {
                        let k = from * ny + (v - nx);
                        flow[k] = flow[k].add(&delta);
                    } else {
                        let k = v * ny + (from - nx);
                        flow[k] = flow[k].sub(&delta);
                    }
                    v = from;
                }
            }
        }
        value = value.add(&delta);
    }
}
