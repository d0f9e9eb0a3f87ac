import numpy as np

SAMPLING_STREAM = 0
MC_STREAM = 1


def generator(seed, stream=SAMPLING_STREAM):
    """
    Counter based generator for (seed, stream).

    Different streams of one seed are independent, and the same pair always yields the same draws no matter which
    thread or process consumes it.
    """
    seed_seq = np.random.SeedSequence(int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.Philox(seed_seq))
