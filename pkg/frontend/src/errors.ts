/** An input artifact violates its documented schema. */
export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

/** Two artifacts that must come from the same run carry different hashes. */
export class RunHashMismatchError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "RunHashMismatchError";
  }
}
