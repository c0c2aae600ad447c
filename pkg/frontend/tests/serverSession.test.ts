// End-to-end editor session against the real language server, exercising
// exactly the protocol surface the extension uses.
import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";

import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { LspSession, uriForPath } from "./lspSession";

const ERROR_SHOWCASE = readFileSync(
    join(__dirname, "..", "..", "tests", "fixtures", "error_showcase.lp"),
    "utf-8",
);
const UNORDERED = "q :- p.\np.\n";

let session: LspSession;
let workDir: string;

function docUri(name: string, text: string): string {
    const path = join(workDir, name);
    writeFileSync(path, text);
    return uriForPath(path);
}

beforeEach(async () => {
    workDir = mkdtempSync(join(tmpdir(), "ezasp-ext-"));
    session = new LspSession();
    await session.initialize();
});

afterEach(async () => {
    await session.stop();
});

describe("server session", () => {
    it("announces the command and code action capabilities the client binds to", async () => {
        const fresh = new LspSession();
        const response = await fresh.initialize();
        const capabilities = response.result.capabilities;
        expect(capabilities.codeActionProvider).toBe(true);
        expect(capabilities.executeCommandProvider.commands).toEqual([
            "ezasp.reorder",
            "ezasp.initConfig",
        ]);
        await fresh.stop();
    });

    it("shows four error squiggles for the documented syntax-error file", async () => {
        const uri = docUri("errors.lp", ERROR_SHOWCASE);
        session.openDocument(uri, ERROR_SHOWCASE);
        const published = await session.waitDiagnostics(uri);
        expect(published.diagnostics).toHaveLength(4);
        for (const diagnostic of published.diagnostics) {
            expect(diagnostic.code).toBe("E-SYNTAX");
            expect(diagnostic.severity).toBe(1); // rendered as red squiggles
            expect(diagnostic.source).toBe("ezasp");
        }
    });

    it("offers the reorder action on ordering warnings and fixes them", async () => {
        const uri = docUri("unordered.lp", UNORDERED);
        session.openDocument(uri, UNORDERED);
        const published = await session.waitDiagnostics(uri);
        const codes = published.diagnostics.map((d: any) => d.code);
        expect(codes).toContain("W-ORDER");

        const response = await session.request("textDocument/codeAction", {
            textDocument: { uri },
            range: { start: { line: 0, character: 0 }, end: { line: 0, character: 0 } },
            context: { diagnostics: [] },
        });
        expect(response.result).toHaveLength(1);
        const action = response.result[0];
        expect(action.title).toBe("Reorder program (Easy ASP)");

        const newText = action.edit.changes[uri][0].newText;
        expect(newText).toBe("p.\n\nq :- p.\n");
        session.changeDocument(uri, newText, 2);
        const after = await session.waitDiagnostics(uri);
        expect(after.diagnostics.map((d: any) => d.code)).not.toContain("W-ORDER");
    });

    it("hides the reorder action on clean or broken documents", async () => {
        const cleanUri = docUri("clean.lp", "p.\nq :- p.\n");
        session.openDocument(cleanUri, "p.\nq :- p.\n");
        await session.waitDiagnostics(cleanUri);
        const clean = await session.request("textDocument/codeAction", {
            textDocument: { uri: cleanUri },
            range: {},
            context: { diagnostics: [] },
        });
        expect(clean.result).toEqual([]);

        const brokenText = "q :- p.\np.\noops(\n";
        const brokenUri = docUri("broken.lp", brokenText);
        session.openDocument(brokenUri, brokenText);
        await session.waitDiagnostics(brokenUri);
        const broken = await session.request("textDocument/codeAction", {
            textDocument: { uri: brokenUri },
            range: {},
            context: { diagnostics: [] },
        });
        expect(broken.result).toEqual([]);
    });

    it("executes the reorder command via workspace/applyEdit", async () => {
        const uri = docUri("viacommand.lp", UNORDERED);
        session.openDocument(uri, UNORDERED);
        await session.waitDiagnostics(uri);
        await session.request("workspace/executeCommand", {
            command: "ezasp.reorder",
            arguments: [uri],
        });
        const applyEdit = await session.waitFor((m) => m.method === "workspace/applyEdit");
        expect(applyEdit.params.edit.changes[uri][0].newText).toBe("p.\n\nq :- p.\n");
    });

    it("generates a config file via the init command", async () => {
        const response = await session.request("workspace/executeCommand", {
            command: "ezasp.initConfig",
            arguments: [workDir],
        });
        expect(response.result).toContain("ezasp.json");
        const config = JSON.parse(readFileSync(join(workDir, "ezasp.json"), "utf-8"));
        expect(config.autoReorderEnabled).toBe(true);
    });

    it("reproduces identical diagnostics after a server restart", async () => {
        const uri = docUri("stable.lp", UNORDERED);
        session.openDocument(uri, UNORDERED);
        const first = await session.waitDiagnostics(uri);
        await session.stop();

        session = new LspSession();
        await session.initialize();
        session.openDocument(uri, UNORDERED);
        const second = await session.waitDiagnostics(uri);
        expect(second.diagnostics).toEqual(first.diagnostics);
    });
});
