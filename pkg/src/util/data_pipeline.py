import csv
import json
import os

import numpy as np
import pandas as pd

from util.errors import InputParseError

# results use 17 significant digits, '.' decimals, ',' separators and unix newlines
FLOAT_FORMAT = '%.17g'
POINT_COLUMNS = ['x', 'y']


def _ensure_dir(path):
    dir_path = os.path.dirname(path)
    if dir_path and not os.path.exists(dir_path):
        os.makedirs(dir_path)


def read_points_csv(path):
    """
    Reads a point file with one 'x,y' pair per line into an (N, 2) array.

    An 'x,y' header on the first line and blank lines are skipped; anything else that is not two finite decimal
    numbers raises InputParseError carrying the 1-based line number.
    """

    try:
        # every line lands in one column, the split below keeps track of line numbers
        df = pd.read_csv(path, header=None, names=['line'], sep='\x01', dtype=str, skip_blank_lines=False,
                         na_filter=False, quoting=csv.QUOTE_NONE)
    except pd.errors.EmptyDataError:
        return np.empty((0, 2))
    except (OSError, UnicodeDecodeError) as e:
        raise InputParseError(f"cannot read {path}: {e}") from e

    lines = df['line'].str.strip()
    if len(lines) and lines.iloc[0].replace(' ', '').lower() == 'x,y':
        lines = lines.iloc[1:]
    lines = lines[lines != '']
    if lines.empty:
        return np.empty((0, 2))

    fields = lines.str.split(',', expand=True)
    if fields.shape[1] != 2 or fields.isna().to_numpy().any():
        counts = lines.str.count(',') + 1
        bad = counts[counts != 2].index[0]
        raise InputParseError(f"expected 2 fields, got {counts[bad]}", line=bad + 1)

    values = fields.apply(lambda col: pd.to_numeric(col.str.strip(), errors='coerce'))
    invalid = values.isna().any(axis=1) | ~np.isfinite(values.to_numpy(dtype=float)).all(axis=1)
    if invalid.any():
        bad = invalid[invalid].index[0]
        raise InputParseError(f"not a pair of finite numbers: {lines[bad]!r}", line=bad + 1)
    return values.to_numpy(dtype=float)


def write_points_csv(path, points):
    _ensure_dir(path)
    df = pd.DataFrame(np.asarray(points, dtype=float).reshape(-1, 2), columns=POINT_COLUMNS)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


def write_table(path, df: pd.DataFrame):
    """ Writes a result table with the fixed float format, nan written as 'nan' """
    _ensure_dir(path)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n', na_rep='nan')


def read_json(path):
    try:
        with open(path, 'r') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InputParseError(f"invalid json in {path}: {e.msg}", line=e.lineno) from e
    except OSError as e:
        raise InputParseError(f"cannot read {path}: {e}") from e


def write_json(path, data):
    _ensure_dir(path)
    with open(path, 'w') as f:
        json.dump(data, f, indent=2)
        f.write('\n')
