from functools import reduce
import atexit
from time import perf_counter as clock
import sys
from typing import List
from datetime import datetime as dt
import re

### LOGGING ###
# all log output goes to stderr, stdout carries command results only

LOG_LEVEL_4_DEBUG = 4
LOG_LEVEL_3_DETAILED = 3
LOG_LEVEL_2_INFO = 2
LOG_LEVEL_1_MAJOR_INFO = 1

def secondsToStr(t, detailed:bool = False):
    # more detailed: %d:%02d:%02d.%03d
    if detailed:
        return "%d:%02d:%02d.%03d" % \
        reduce(lambda ll,b : divmod(ll[0],b) + ll[1:],
            [(t*1000,),1000,60,60])

    return "%d:%02d:%02d" % \
        reduce(lambda ll,b : divmod(ll[0],b) + ll[1:],
            [(t,),60,60])

lineTime = "-"*11

verbose_level = LOG_LEVEL_1_MAJOR_INFO

def _err(*parts):
    print(*parts, file=sys.stderr)

# level: debug message detail level - 1: Major info - 2: INFO - 3: Detailed - 4: Debug level
def log(msg: str, level=LOG_LEVEL_3_DETAILED, elapsed = None):
    if(verbose_level < level):
        return
    if(level < LOG_LEVEL_4_DEBUG):
        _err(secondsToStr(clock()), '-', msg)
    else:
        _err(msg)
    if elapsed:
        _err("Elapsed time:", elapsed)

# shorthand functions

def majorInfo(msg: str):
    log(msg, LOG_LEVEL_1_MAJOR_INFO)

def info(msg: str):
    log(msg, LOG_LEVEL_2_INFO)

def debugLog(msg: str):
    log(msg, LOG_LEVEL_4_DEBUG)

# task logging with time tracking

def logBeginTask(s, level = LOG_LEVEL_3_DETAILED):
    global startT, taskS
    if(verbose_level < level):
        return
    taskS = s
    _err(">>> at", dt.now().strftime('%H:%M:%S'), ">>> ", s, "")
    startT = clock()

def logEndTask():
    global taskS, startT
    if taskS is None:
        return
    _err(">>> ", taskS, "completed.")
    _err(lineTime, "took", secondsToStr(clock()-startT, detailed=True), lineTime)
    taskS = None

def endlog():
    end = clock()
    elapsed = end-start
    info(f"poetool terminating after {secondsToStr(elapsed, detailed=True)} (hr:min:sec.ms) at {dt.now().strftime('%H:%M:%S')}.")

def start_session():
    global start, _session_registered
    start = clock()
    if not _session_registered:
        atexit.register(endlog)
        _session_registered = True
    log("Program started.")

start = clock()
startT = clock()
taskS = None
_session_registered = False


### other helper functions

def overrideParams(orig: dict, override: dict) -> dict:
    if orig == None:
        raise Exception("ERROR: original dict is None!")
    if override == None:
        log("No override parameters given -> skipping.", LOG_LEVEL_4_DEBUG)
        return orig
    result = orig.copy()
    for key in override:
        if override[key] is None:
            continue
        if key in result:
            log(f"{key}: replacing value '{result[key]}' with '{override[key]}'", LOG_LEVEL_4_DEBUG)
        result[key] = override[key]
    return result


def require_keys(settings: dict, required_keys: List[str], error_message: str = "A required settings key was not provided."):
    if not has_keys(settings, required_keys, loglevel=1):
        raise KeyError(f"{error_message} {required_keys}")

def has_keys(settings: dict, keys: List[str], loglevel: int = 4) -> bool:
    for key in keys:
        if key not in settings:
            log(f"key '{key}' not provided.", loglevel)
            return False
    return True

def require_allowed_value(setting_value: str, setting_name: str, allowed: List[str]):
    if setting_value in allowed:
        return
    raise ValueError(f"{setting_name}: '{setting_value}' is not one of the allowed values: {' '.join(allowed)}")


# helper functions for parsing user input / settings values

def str_to_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in ("1", "true", "yes", "on")

def str_to_int(value, name: str = "value") -> int:
    v = str(value).strip().replace("_", "")
    m = re.fullmatch(r"(\d+)\s*\*\*\s*(\d+)", v)
    if m:
        return int(m.group(1)) ** int(m.group(2))
    if not re.fullmatch(r"[+-]?\d+", v):
        raise ValueError(f"Unable to convert {name} '{value}' to an integer.")
    return int(v)
