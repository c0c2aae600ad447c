"use strict";
// Pure helpers for reading extension settings and resolving the server
// command; kept free of the vscode module so they are unit-testable.
Object.defineProperty(exports, "__esModule", { value: true });
exports.MISSING_SERVER_MESSAGE = void 0;
exports.readSettings = readSettings;
exports.resolveServerCommand = resolveServerCommand;
const TRACE_LEVELS = ["off", "messages", "verbose"];
function readSettings(get) {
    const rawPath = get("ezasp.serverPath");
    const rawTrace = get("ezasp.trace");
    const serverPath = typeof rawPath === "string" && rawPath.trim() !== "" ? rawPath.trim() : undefined;
    const trace = TRACE_LEVELS.includes(rawTrace)
        ? rawTrace
        : "off";
    return { serverPath, trace };
}
/**
 * Resolve the command that launches the language server.
 *
 * An explicit serverPath must exist on disk; without one the `ezasp`
 * executable is resolved from PATH at spawn time. Returns undefined when
 * the configured path is missing, so the caller can surface an install
 * hint instead of crashing.
 */
function resolveServerCommand(settings, exists) {
    if (settings.serverPath !== undefined) {
        if (!exists(settings.serverPath)) {
            return undefined;
        }
        return { command: settings.serverPath, args: ["lsp"] };
    }
    return { command: "ezasp", args: ["lsp"] };
}
exports.MISSING_SERVER_MESSAGE = "The ezasp language server was not found. Install it with " +
    "'pip install ezasp' or point ezasp.serverPath at the executable.";
//# sourceMappingURL=settings.js.map