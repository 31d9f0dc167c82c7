#include "symboleo/codegen/generator.hpp"

namespace symboleo::codegen
{

namespace
{

// Mirrors contract-runtime: three-valued propositions (true / false /
// undefined = not yet decided), minute timestamps, fixpoint evaluation.
constexpr std::string_view kLibrary = R"JS('use strict';
// symboleo-js-core: support library for generated Symboleo contracts.

const MINUTE = 60 * 1000;
const DAY = 1440 * MINUTE;

class ContractError extends Error {
  constructor(code, message) {
    super(message);
    this.code = code;
  }
}

const Time = {
  date(iso) {
    const t = Date.parse(`${iso}T00:00:00Z`);
    if (Number.isNaN(t)) {
      throw new ContractError('E801', `invalid date ${iso}`);
    }
    return t;
  },
  parse(ts) {
    if (typeof ts === 'number') {
      return ts;
    }
    const s = ts.length === 10 ? `${ts}T00:00` : ts.replace(' ', 'T');
    const t = Date.parse(`${s}:00Z`);
    if (Number.isNaN(t)) {
      throw new ContractError('E805', `invalid timestamp ${ts}`);
    }
    return t;
  },
  format(t) {
    return new Date(t).toISOString().slice(0, 16);
  },
  add(t, magnitude, unit) {
    if (unit === 'days') {
      return t + magnitude * DAY;
    }
    if (unit === 'weeks') {
      return t + magnitude * 7 * DAY;
    }
    const d = new Date(t);
    const months = d.getUTCMonth() + magnitude;
    const year = d.getUTCFullYear() + Math.floor(months / 12);
    const month = ((months % 12) + 12) % 12;
    const last = new Date(Date.UTC(year, month + 1, 0)).getUTCDate();
    const day = Math.min(d.getUTCDate(), last);
    return Date.UTC(year, month, day, d.getUTCHours(), d.getUTCMinutes());
  },
};

// Half-open [start, end) once known; null while a relative anchor is absent.
class Interval {
  static absolute(start, end) {
    return new Interval(() => ({ start, end: end + DAY }));
  }

  static relative(anchor, magnitude, unit) {
    return new Interval(() => {
      const first = anchor.occurrences()[0];
      if (!first) {
        return null;
      }
      return { start: first.timestamp, end: Time.add(first.timestamp, magnitude, unit) + MINUTE };
    });
  }

  constructor(bounds) {
    this.bounds = bounds;
  }
}

const Predicates = {
  TRUE: true,
  FALSE: false,
  happens(evt) {
    return evt.occurrences().length > 0 ? true : evt.closedOr(undefined);
  },
  happensBefore(evt, deadline, clock) {
    if (evt.occurrences().some((o) => o.timestamp < deadline)) {
      return true;
    }
    return clock >= deadline ? false : undefined;
  },
  happensAfter(evt, time, clock) {
    if (evt.occurrences().some((o) => o.timestamp >= time + DAY)) {
      return true;
    }
    return evt.closedOr(undefined);
  },
  happensWithin(evt, interval, clock) {
    const b = interval.bounds();
    if (!b) {
      return undefined;
    }
    if (evt.occurrences().some((o) => o.timestamp >= b.start && o.timestamp < b.end)) {
      return true;
    }
    return clock >= b.end ? false : undefined;
  },
  someOccurrence(evt, test) {
    return evt.occurrences().some(test) ? true : evt.closedOr(undefined);
  },
  not(a) {
    return a === undefined ? undefined : !a;
  },
  and(a, b) {
    if (a === false || b === false) {
      return false;
    }
    return a === true && b === true ? true : undefined;
  },
  or(a, b) {
    if (a === true || b === true) {
      return true;
    }
    return a === false && b === false ? false : undefined;
  },
};

function checkKind(kind, value) {
  if (kind === 'Number') {
    return typeof value === 'number' && Number.isFinite(value);
  }
  if (kind === 'Date') {
    return typeof value === 'number' || !Number.isNaN(Date.parse(`${value}T00:00:00Z`));
  }
  return typeof value === 'string';
}

class Entity {
  constructor(name, type) {
    this._name = name;
    this._type = type;
  }

  // Fields missing from `fields` fall back to the entity's bound values.
  static checkFields(attributes, fields, entity) {
    const full = {};
    for (const a of attributes) {
      const v = a.name in fields ? fields[a.name] : entity[a.name];
      if (v === undefined || !checkKind(a.kind, v)) {
        throw new ContractError('E805', `${entity._name}: attribute ${a.name} must be a ${a.kind}`);
      }
      full[a.name] = v;
    }
    return full;
  }
}

class Role extends Entity {}
class Asset extends Entity {}

class Event extends Entity {
  constructor(name, type) {
    super(name, type);
    this._log = [];
    this._contract = null;
  }

  happen(timestamp, fields) {
    if (this._contract && this._contract.state !== 'InEffect') {
      return;
    }
    const full = Entity.checkFields(this.constructor.attributes, fields, this);
    this._log.push({ timestamp: Time.parse(timestamp), ...full });
  }

  occurrences() {
    return this._log;
  }

  restoreOccurrences(list) {
    this._log = list.map((o) => ({ ...o }));
  }

  // False once the contract window has closed, else `open`.
  closedOr(open) {
    const c = this._contract;
    return c && c.closed() ? false : open;
  }
}

class Obligation {
  constructor(id, contract, spec) {
    this.id = id;
    this.contract = contract;
    this.spec = spec;
    this.state = 'Created';
  }

  activate() {
    this.contract.move(this, 'InEffect', 'imposed');
  }

  suspend() {
    if (this.state === 'InEffect') {
      this.contract.move(this, 'Suspended', 'suspended by power');
    }
  }

  resume() {
    if (this.state === 'Suspended') {
      this.contract.move(this, 'InEffect', 'resumed by power');
    }
  }

  violatedState() {
    if (this.state === 'Violated') {
      return true;
    }
    return this.state === 'Fulfilled' ? false : undefined;
  }

  fulfilledState() {
    if (this.state === 'Fulfilled') {
      return true;
    }
    return this.state === 'Violated' ? false : undefined;
  }

  step() {
    if (this.state === 'Created' && this.spec.trigger() === true) {
      return this.contract.move(this, 'InEffect', 'trigger holds');
    }
    if (this.state !== 'InEffect') {
      return false;
    }
    const v = this.spec.consequent();
    if (v === true) {
      return this.contract.move(this, 'Fulfilled', 'consequent satisfied');
    }
    if (v === false) {
      return this.contract.move(this, 'Violated', 'consequent can no longer be satisfied');
    }
    return false;
  }
}

class Power {
  constructor(id, contract, spec) {
    this.id = id;
    this.contract = contract;
    this.spec = spec;
    this.state = 'Created';
  }

  step() {
    if (this.state === 'Created' && this.spec.trigger() === true) {
      return this.contract.move(this, 'InEffect', 'trigger holds');
    }
    return false;
  }
}

class Contract {
  constructor(id, name) {
    this.id = id;
    this.name = name;
    this.state = 'InEffect';
    this.clock = 0;
    this.obligations = {};
    this.powers = {};
    this._report = [];
  }

  static bindParameters(parameters, args) {
    const out = {};
    for (const p of parameters) {
      const v = args[p.name];
      if (v === undefined || v === null || v === '') {
        throw new ContractError('E801', `missing value for parameter ${p.name}`);
      }
      if (p.kind === 'Date') {
        out[p.name] = Time.date(String(v));
      } else if (p.kind === 'Number' || p.kind === 'Money' || p.kind === 'Percentage') {
        const n = Number(String(v).replace(/[$,%]/g, ''));
        if (!Number.isFinite(n)) {
          throw new ContractError('E801', `parameter ${p.name} must be a ${p.kind}`);
        }
        out[p.name] = n;
      } else {
        out[p.name] = String(v);
      }
    }
    return out;
  }

  start(timestamp) {
    this.clock = Time.parse(timestamp);
    for (const key of Object.keys(this)) {
      if (this[key] instanceof Event) {
        this[key]._contract = this;
      }
    }
    this.settle();
    return this.evaluate();
  }

  obligation(id) {
    return this.obligations[id] || { violatedState: () => undefined, fulfilledState: () => undefined };
  }

  closed() {
    return this.params.contract_end !== undefined && this.clock >= this.params.contract_end;
  }

  move(entity, to, reason) {
    this._report.push({ id: entity.id, from: entity.state, to, reason, at: Time.format(this.clock) });
    entity.state = to;
    return true;
  }

  advanceTo(timestamp) {
    const t = Time.parse(timestamp);
    if (t < this.clock) {
      throw new ContractError('E802', `time ${Time.format(t)} is before the clock ${Time.format(this.clock)}`);
    }
    if (this.state === 'InEffect') {
      this.clock = t;
      this.settle();
    }
  }

  settle() {
    if (this.state !== 'InEffect') {
      return;
    }
    let changed = true;
    while (changed) {
      changed = false;
      for (const o of Object.values(this.obligations)) {
        changed = o.step() || changed;
      }
      for (const p of Object.values(this.powers)) {
        changed = p.step() || changed;
      }
    }
    const obligations = Object.values(this.obligations);
    const powers = Object.values(this.powers);
    if (obligations.every((o) => o.state === 'Fulfilled') && !powers.some((p) => p.state === 'InEffect')) {
      this._report.push({ id: this.name, from: this.state, to: 'Fulfilled', reason: 'all obligations fulfilled' });
      this.state = 'Fulfilled';
      powers.filter((p) => p.state === 'Created').forEach((p) => this.move(p, 'Expired', 'contract fulfilled'));
    }
  }

  evaluate() {
    this.settle();
    const report = this._report;
    this._report = [];
    return report;
  }

  exert(powerId) {
    const p = this.powers[powerId];
    if (!p || p.state !== 'InEffect' || this.state !== 'InEffect') {
      throw new ContractError('E804', `power ${powerId} is not in effect`);
    }
    this._exerting = p;
    p.spec.action();
    this._exerting = null;
    if (p.state === 'InEffect') {
      this.move(p, 'Exerted', 'exerted by holder');
    }
    return this.evaluate();
  }

  terminate() {
    for (const p of Object.values(this.powers)) {
      if (p.state === 'InEffect' && p !== this._exerting) {
        this.move(p, 'Expired', 'contract terminated');
      }
    }
    this._report.push({ id: this.name, from: this.state, to: 'Terminated', reason: 'terminated by power' });
    this.state = 'Terminated';
  }

  status() {
    const states = (m) => Object.fromEntries(Object.entries(m).map(([k, v]) => [k, v.state]));
    return {
      contract: this.state,
      clock: Time.format(this.clock),
      obligations: states(this.obligations),
      powers: states(this.powers),
    };
  }
}

class Router {
  constructor(contract) {
    this.contract = contract;
  }

  tick(timestamp) {
    this.contract.advanceTo(timestamp);
    return this.contract.evaluate();
  }
}

module.exports = {
  Asset, Contract, ContractError, Event, Interval, Obligation, Power, Predicates, Role, Router, Time,
};
)JS";

}  // namespace

std::string_view runtime_library_js()
{
  return kLibrary;
}

}  // namespace symboleo::codegen
