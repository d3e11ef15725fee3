def oracle_orth(*a, **k):
    raise NotImplementedError
